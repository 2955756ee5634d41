"""Cell MultiComplex data model.

A complex is a set of layers, each carrying an intra-layer cell complex,
plus cross-cells that join exactly two layers.  Every cell stores its
signed boundary explicitly; matrices elsewhere in the package are read off
these lists and never recomputed from vertex sets.

Cells are addressed by string ids that are unique across the whole complex.
Cross-cells are typed by ``(k, n)``, the highest order of their faces on
the lower layer ``l`` and on the higher layer ``m``.  The sentinel ``-1``
marks "no face on that layer", so intra-layer ``q``-cells of ``l`` form the
``(q, -1)`` family and those of ``m`` the ``(-1, q)`` family.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, NamedTuple

from .errors import (
    DanglingReference,
    DuplicateId,
    InvalidOrderPair,
    MultiLayerCell,
    OrderViolation,
    OrientationError,
    ParseError,
    ScopeError,
    UnknownLayer,
)

Scope = tuple  # (l,) for intra-layer cells, (l, m) with l < m for cross-cells


@dataclass(frozen=True)
class Cell:
    id: str
    order: int
    scope: Scope
    boundary: tuple[tuple[str, int], ...] = ()

    @property
    def is_cross(self) -> bool:
        return len(self.scope) == 2

    @property
    def layers(self) -> tuple[int, ...]:
        return tuple(self.scope)


class Flattened(NamedTuple):
    """Monocomplex view: cell ids per order in block order."""

    nodes: tuple[str, ...]
    edges: tuple[str, ...]
    cells: tuple[str, ...]

    @property
    def N(self) -> int:
        return len(self.nodes)

    @property
    def E(self) -> int:
        return len(self.edges)

    @property
    def C(self) -> int:
        return len(self.cells)


@dataclass(frozen=True, eq=False)
class CellMultiComplex:
    """Validated, immutable Cell MultiComplex.

    Build instances with :func:`build_complex`; the constructor performs no
    validation.
    """

    layers: tuple[int, ...]
    cells: Mapping[str, Cell]
    _by_scope: Mapping[tuple[Scope, int], tuple[str, ...]] = field(repr=False)
    _types: Mapping[str, tuple[int, int]] = field(repr=False)

    # --- lookup ----------------------------------------------------------

    def __contains__(self, cell_id: str) -> bool:
        return cell_id in self.cells

    def cell(self, cell_id: str) -> Cell:
        return self.cells[cell_id]

    @property
    def max_order(self) -> int:
        return max((c.order for c in self.cells.values()), default=-1)

    def nodes(self, layer: int) -> tuple[str, ...]:
        self._check_layer(layer)
        return self._by_scope.get(((layer,), 0), ())

    def intra(self, layer: int, order: int) -> tuple[str, ...]:
        self._check_layer(layer)
        return self._by_scope.get(((layer,), order), ())

    def cross(self, l: int, m: int, order: int) -> tuple[str, ...]:
        self._check_pair(l, m)
        return self._by_scope.get(((l, m), order), ())

    def cross_type(self, cell_id: str) -> tuple[int, int]:
        """``(k, n)`` type of a cross-cell."""
        return self._types[cell_id]

    def cross_pairs(self) -> list[tuple[int, int]]:
        pairs = {scope for (scope, _), ids in self._by_scope.items() if len(scope) == 2 and ids}
        return sorted(pairs)

    def endpoints(self, edge_id: str) -> tuple[str, str]:
        """``(tail, head)`` of a 1-cell, read from its signed boundary."""
        cell = self.cells[edge_id]
        if cell.order != 1:
            raise OrderViolation(f"{edge_id!r} is not an edge")
        (a, sa), (b, _) = cell.boundary
        return (a, b) if sa < 0 else (b, a)

    def layer_of(self, node_id: str) -> int:
        cell = self.cells[node_id]
        if cell.order != 0:
            raise OrderViolation(f"{node_id!r} is not a node")
        return cell.scope[0]

    # --- families --------------------------------------------------------

    def family(self, l: int, m: int, k: int, n: int) -> tuple[str, ...]:
        """Ordered ids of the ``(k, n)`` family between layers ``l < m``.

        ``(k, -1)`` is the order-``k`` intra complex of ``l`` and ``(-1, n)``
        the order-``n`` intra complex of ``m``.  Pairs with an entry below
        ``-1``, or ``(-1, -1)``, name no cells and return an empty tuple.
        """
        self._check_layer(l)
        self._check_layer(m)
        if k < -1 or n < -1 or (k == -1 and n == -1):
            return ()
        if n == -1:
            return self.intra(l, k)
        if k == -1:
            return self.intra(m, n)
        if not l < m:
            raise InvalidOrderPair(f"cross families need l < m, got ({l}, {m})")
        out = []
        for q in range(1, k + n + 2):
            out.extend(c for c in self._by_scope.get(((l, m), q), ()) if self._types[c] == (k, n))
        return tuple(out)

    def cell_count(self, l: int, m: int, k: int, n: int) -> int:
        return len(self.family(l, m, k, n))

    # --- monocomplex view -----------------------------------------------

    def block_order(self, order: int) -> tuple[str, ...]:
        """All cells of one order in the block order l, (l,l+1), ..., (l,L), l+1, ..."""
        out: list[str] = []
        for i, l in enumerate(self.layers):
            out.extend(self._by_scope.get(((l,), order), ()))
            for m in self.layers[i + 1:]:
                out.extend(self._by_scope.get(((l, m), order), ()))
        return tuple(out)

    def flatten(self) -> Flattened:
        return Flattened(self.block_order(0), self.block_order(1), self.block_order(2))

    # --- helpers ---------------------------------------------------------

    def _check_layer(self, layer: int) -> None:
        if layer not in self.layers:
            raise UnknownLayer(f"unknown layer {layer!r}; known layers {list(self.layers)}")

    def _check_pair(self, l: int, m: int) -> None:
        self._check_layer(l)
        self._check_layer(m)
        if not l < m:
            raise InvalidOrderPair(f"layer pair must satisfy l < m, got ({l}, {m})")


# -------------------------------------------------------------------------
# construction
# -------------------------------------------------------------------------

def _req(record: Mapping[str, Any], key: str, where: str) -> Any:
    if not isinstance(record, Mapping):
        raise ParseError(f"{where}: expected an object, got {type(record).__name__}")
    if key not in record:
        raise ParseError(f"{where}: missing field {key!r}")
    return record[key]


def _as_id(value: Any, where: str) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ParseError(f"{where}: ids must be strings or integers, got {value!r}")
    return str(value)


def _as_layer(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ParseError(f"{where}: layer ids are positive integers, got {value!r}")
    return value


def _as_sign(value: Any, where: str) -> int:
    if isinstance(value, bool) or value not in (-1, 1):
        raise ParseError(f"{where}: sign must be -1 or 1, got {value!r}")
    return int(value)


def _as_scope(value: Any, where: str) -> Scope:
    if isinstance(value, (list, tuple)):
        if len(value) == 1:
            return (_as_layer(value[0], where),)
        if len(value) != 2:
            raise MultiLayerCell(f"{where}: a cell scope names one or two layers, got {value!r}")
        a, b = (_as_layer(v, where) for v in value)
        if a == b:
            return (a,)
        return (min(a, b), max(a, b))
    return (_as_layer(value, where),)


class _Builder:
    def __init__(self) -> None:
        self.layers: list[int] = []
        self.cells: dict[str, Cell] = {}

    def add(self, cell: Cell, where: str) -> None:
        if cell.id in self.cells:
            raise DuplicateId(f"{where}: duplicate cell id {cell.id!r}")
        for layer in cell.scope:
            if layer not in self.layers:
                raise ScopeError(f"{where}: cell {cell.id!r} names undeclared layer {layer}")
        self.cells[cell.id] = cell

    def face(self, face_id: str, owner: str, where: str) -> Cell:
        try:
            return self.cells[face_id]
        except KeyError:
            raise DanglingReference(f"{where}: cell {owner!r} references unknown cell {face_id!r}") from None


def _check_face_scope(builder: _Builder, cell: Cell, where: str) -> None:
    allowed = {cell.scope}
    if cell.is_cross:
        l, m = cell.scope
        allowed |= {(l,), (m,)}
    for face_id, _ in cell.boundary:
        face = builder.cells[face_id]
        if face.scope in allowed:
            continue
        touched = set(cell.scope) | set(face.scope)
        if len(touched) > 2 or (cell.is_cross and not set(face.scope) <= set(cell.scope)):
            raise MultiLayerCell(
                f"{where}: cell {cell.id!r} with scope {list(cell.scope)} is bounded by "
                f"{face_id!r} on layers {list(face.scope)}"
            )
        raise ScopeError(
            f"{where}: intra-layer cell {cell.id!r} on layer {cell.scope[0]} is bounded by "
            f"{face_id!r} with scope {list(face.scope)}"
        )


def _check_closed(builder: _Builder, cell: Cell, where: str) -> None:
    """Boundary of the boundary must vanish; 2-cells must also form one connected cycle."""
    total: dict[str, int] = defaultdict(int)
    for face_id, sign in cell.boundary:
        for sub_id, sub_sign in builder.cells[face_id].boundary:
            total[sub_id] += sign * sub_sign
    if any(total.values()):
        bad = sorted(k for k, v in total.items() if v)
        raise OrientationError(
            f"{where}: signed boundary of {cell.id!r} is not closed (unbalanced at {bad})"
        )
    if cell.order != 2:
        return
    # walk the oriented edges: every arc must be reachable from the first one
    arcs = []
    for face_id, sign in cell.boundary:
        (a, sa), (b, _) = builder.cells[face_id].boundary
        tail, head = (a, b) if sa < 0 else (b, a)
        arcs.append((tail, head) if sign > 0 else (head, tail))
    adjacency: dict[str, set[str]] = defaultdict(set)
    for tail, head in arcs:
        adjacency[tail].add(head)
        adjacency[head].add(tail)
    seen = {arcs[0][0]}
    stack = [arcs[0][0]]
    while stack:
        node = stack.pop()
        for nxt in adjacency[node] - seen:
            seen.add(nxt)
            stack.append(nxt)
    if seen != set(adjacency):
        raise OrientationError(f"{where}: boundary of {cell.id!r} is not a single connected cycle")


def _cross_types(cells: Mapping[str, Cell]) -> dict[str, tuple[int, int]]:
    types: dict[str, tuple[int, int]] = {}

    def face_type(face: Cell, scope: Scope) -> tuple[int, int]:
        if face.is_cross:
            return types[face.id]
        if face.scope[0] == scope[0]:
            return (face.order, -1)
        return (-1, face.order)

    # cells are validated bottom-up, so faces are typed before their cofaces
    for cell in sorted((c for c in cells.values() if c.is_cross), key=lambda c: c.order):
        ks, ns = zip(*(face_type(cells[f], cell.scope) for f, _ in cell.boundary))
        types[cell.id] = (max(ks), max(ns))
    return types


def build_complex(spec: Mapping[str, Any]) -> CellMultiComplex:
    """Validate a raw complex description and freeze its orderings.

    ``spec`` follows the JSON complex format::

        {"layers": [{"id": 1, "nodes": ["u1", "u2"]}, ...],
         "intra_edges": [{"layer": 1, "id": "e1", "tail": "u1", "head": "u2"}],
         "cross_edges": [{"layers": [1, 2], "id": "x1", "tail": "u1", "head": "v1"}],
         "two_cells": [{"scope": [1, 2], "id": "T",
                        "boundary": [{"edge_id": "x1", "sign": -1}, ...]}],
         "higher_cells": [{"scope": ..., "id": ..., "order": 3,
                           "boundary": [{"cell_id": ..., "sign": ...}]}]}

    A cross-edge may give ``"endpoints": [a, b]`` instead of tail/head, in
    which case it is oriented from the lower to the higher layer.  Every
    family keeps declaration order.

    Raises
    ------
    ParseError
        Structurally malformed records (missing fields, bad signs).
    DanglingReference, OrderViolation, MultiLayerCell, ScopeError, OrientationError
        The description violates the cell-complex axioms.
    """
    if not isinstance(spec, Mapping):
        raise ParseError("complex description must be a JSON object")
    b = _Builder()

    raw_layers = _req(spec, "layers", "complex")
    if not isinstance(raw_layers, list) or not raw_layers:
        raise ParseError("layers: expected a non-empty list")
    for i, rec in enumerate(raw_layers):
        where = f"layers[{i}]"
        lid = _as_layer(_req(rec, "id", where), f"{where}.id")
        if lid in b.layers:
            raise DuplicateId(f"{where}: duplicate layer id {lid}")
        b.layers.append(lid)
    b.layers.sort()
    for i, rec in enumerate(raw_layers):
        where = f"layers[{i}]"
        lid = rec["id"]
        nodes = _req(rec, "nodes", where)
        if not isinstance(nodes, list):
            raise ParseError(f"{where}.nodes: expected a list")
        for j, nid in enumerate(nodes):
            b.add(Cell(_as_id(nid, f"{where}.nodes[{j}]"), 0, (lid,)), f"{where}.nodes[{j}]")

    def edge(rec: Mapping[str, Any], where: str, cross: bool) -> None:
        eid = _as_id(_req(rec, "id", where), f"{where}.id")
        if cross and "tail" not in rec and "endpoints" in rec:
            ends = rec["endpoints"]
            if not isinstance(ends, list) or len(ends) != 2:
                raise ParseError(f"{where}.endpoints: expected two node ids")
            a, c = (_as_id(v, f"{where}.endpoints") for v in ends)
            na, nc = b.face(a, eid, where), b.face(c, eid, where)
            tail, head = (a, c) if na.scope[0] <= nc.scope[0] else (c, a)
        else:
            tail = _as_id(_req(rec, "tail", where), f"{where}.tail")
            head = _as_id(_req(rec, "head", where), f"{where}.head")
        t, h = b.face(tail, eid, where), b.face(head, eid, where)
        for node in (t, h):
            if node.order != 0:
                raise OrderViolation(f"{where}: edge {eid!r} endpoint {node.id!r} has order {node.order}")
        if tail == head:
            raise OrientationError(f"{where}: edge {eid!r} needs two distinct endpoints with signs -1/+1")
        if cross:
            scope = _as_scope(_req(rec, "layers", where), f"{where}.layers")
            if len(scope) != 2:
                raise ScopeError(f"{where}: cross-edge {eid!r} must join two distinct layers")
            if {t.scope[0], h.scope[0]} != set(scope):
                touched = {t.scope[0], h.scope[0]} | set(scope)
                err = MultiLayerCell if len(touched) > 2 else ScopeError
                raise err(f"{where}: cross-edge {eid!r} endpoints do not lie on layers {list(scope)}")
        else:
            scope = (_as_layer(_req(rec, "layer", where), f"{where}.layer"),)
            if t.scope != scope or h.scope != scope:
                raise ScopeError(f"{where}: intra edge {eid!r} endpoints are not on layer {scope[0]}")
        b.add(Cell(eid, 1, scope, ((tail, -1), (head, 1))), where)

    for i, rec in enumerate(spec.get("intra_edges", [])):
        edge(rec, f"intra_edges[{i}]", cross=False)
    for i, rec in enumerate(spec.get("cross_edges", [])):
        edge(rec, f"cross_edges[{i}]", cross=True)

    def polytope(rec: Mapping[str, Any], where: str, order: int, face_key: str) -> None:
        cid = _as_id(_req(rec, "id", where), f"{where}.id")
        scope = _as_scope(_req(rec, "scope", where), f"{where}.scope")
        raw = _req(rec, "boundary", where)
        if not isinstance(raw, list) or not raw:
            raise ParseError(f"{where}.boundary: expected a non-empty list")
        bnd = []
        for j, entry in enumerate(raw):
            w = f"{where}.boundary[{j}]"
            fid = _as_id(_req(entry, face_key, w), f"{w}.{face_key}")
            sign = _as_sign(_req(entry, "sign", w), f"{w}.sign")
            face = b.face(fid, cid, w)
            if face.order != order - 1:
                raise OrderViolation(
                    f"{w}: {order}-cell {cid!r} cannot be bounded by {fid!r} of order {face.order}"
                )
            bnd.append((fid, sign))
        if len({f for f, _ in bnd}) != len(bnd):
            raise ParseError(f"{where}: repeated face in boundary of {cid!r}")
        cell = Cell(cid, order, scope, tuple(bnd))
        b.add(cell, where)
        _check_face_scope(b, cell, where)
        _check_closed(b, cell, where)

    for i, rec in enumerate(spec.get("two_cells", [])):
        polytope(rec, f"two_cells[{i}]", 2, "edge_id")
    higher = sorted(
        enumerate(spec.get("higher_cells", [])),
        key=lambda item: item[1].get("order", 0) if isinstance(item[1], Mapping) else 0,
    )
    for i, rec in higher:
        where = f"higher_cells[{i}]"
        order = _req(rec, "order", where)
        if isinstance(order, bool) or not isinstance(order, int) or order < 3:
            raise ParseError(f"{where}.order: higher cells have integer order >= 3")
        polytope(rec, where, order, "cell_id")

    types = _cross_types(b.cells)
    for cid, (k, n) in types.items():
        if k < 0 or n < 0:
            raise ScopeError(f"cross-cell {cid!r} has faces on only one layer (type ({k}, {n}))")

    by_scope: dict[tuple[Scope, int], list[str]] = defaultdict(list)
    for cell in b.cells.values():
        by_scope[(cell.scope, cell.order)].append(cell.id)
    return CellMultiComplex(
        layers=tuple(b.layers),
        cells=dict(b.cells),
        _by_scope={key: tuple(ids) for key, ids in by_scope.items()},
        _types=types,
    )


def to_spec(X: CellMultiComplex) -> dict[str, Any]:
    """Raw description of ``X`` that :func:`build_complex` accepts.

    Cross-edges are written with explicit tail/head so orientation defaults
    become visible.
    """
    spec: dict[str, Any] = {
        "layers": [{"id": l, "nodes": list(X.nodes(l))} for l in X.layers],
        "intra_edges": [],
        "cross_edges": [],
        "two_cells": [],
    }
    higher = []
    for cell in X.cells.values():
        if cell.order == 1:
            tail, head = X.endpoints(cell.id)
            if cell.is_cross:
                spec["cross_edges"].append(
                    {"layers": list(cell.scope), "id": cell.id, "tail": tail, "head": head}
                )
            else:
                spec["intra_edges"].append({"layer": cell.scope[0], "id": cell.id, "tail": tail, "head": head})
        elif cell.order == 2:
            spec["two_cells"].append({
                "scope": list(cell.scope),
                "id": cell.id,
                "boundary": [{"edge_id": f, "sign": s} for f, s in cell.boundary],
            })
        elif cell.order > 2:
            higher.append({
                "scope": list(cell.scope),
                "id": cell.id,
                "order": cell.order,
                "boundary": [{"cell_id": f, "sign": s} for f, s in cell.boundary],
            })
    if higher:
        spec["higher_cells"] = higher
    return spec


def cell_count(X: CellMultiComplex, l: int, m: int, k: int, n: int) -> int:
    """Number of cells in the ``(k, n)`` family of the layer pair ``(l, m)``."""
    return X.cell_count(l, m, k, n)


def flatten(X: CellMultiComplex) -> Flattened:
    return X.flatten()


def transitive_faces(X: CellMultiComplex, cell_id: str) -> set[str]:
    """All cells that bound ``cell_id`` through chains of boundary relations."""
    out: set[str] = set()
    stack = [f for f, _ in X.cell(cell_id).boundary]
    while stack:
        f = stack.pop()
        if f not in out:
            out.add(f)
            stack.extend(g for g, _ in X.cell(f).boundary)
    return out


def layer_graph_components(X: CellMultiComplex, layer: int) -> dict[str, int]:
    """Connected-component label of every node of one layer's intra graph."""
    parent = {v: v for v in X.nodes(layer)}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in X.intra(layer, 1):
        a, c = X.endpoints(e)
        ra, rc = find(a), find(c)
        if ra != rc:
            parent[rc] = ra
    labels: dict[str, int] = {}
    out = {}
    for v in X.nodes(layer):
        out[v] = labels.setdefault(find(v), len(labels))
    return out


def iter_edges(X: CellMultiComplex, ids: Iterable[str]) -> Iterable[tuple[str, str, str]]:
    for e in ids:
        tail, head = X.endpoints(e)
        yield e, tail, head
