"""Regenerate the JSON fixtures shipped in src/cmctsp/data.

    python3 scripts/build_fixtures.py

Every fixture is written in canonical form, so re-running this script on
an unchanged tree leaves the files byte-identical.
"""

from __future__ import annotations

from itertools import combinations
from pathlib import Path

from cmctsp.complex import build_complex
from cmctsp.formats import canonical_json, write_complex, write_json
from cmctsp.laplacians import cross_betti, hodge_laplacians
from cmctsp.spectral import eig_sym

DATA = Path(__file__).resolve().parents[1] / "src" / "cmctsp" / "data"


def _edge(layer, a, b):
    return {"layer": layer, "id": f"e{a}_{b}", "tail": str(a), "head": str(b)}


def _cross(l, m, a, b):
    return {"layers": [l, m], "id": f"x{a}_{b}", "tail": str(a), "head": str(b)}


def _cycle(cid, scope, steps, orient):
    """2-cell from a node cycle; ``orient`` maps edge id -> (tail, head)."""
    bnd = []
    for s, t in zip(steps, steps[1:] + steps[:1]):
        for eid, (tail, head) in orient.items():
            if (tail, head) == (str(s), str(t)):
                bnd.append({"edge_id": eid, "sign": 1})
                break
            if (tail, head) == (str(t), str(s)):
                bnd.append({"edge_id": eid, "sign": -1})
                break
        else:
            raise ValueError(f"no edge between {s} and {t}")
    return {"scope": scope, "id": cid, "boundary": bnd}


def _orient(spec):
    return {e["id"]: (e["tail"], e["head"]) for e in spec["intra_edges"] + spec["cross_edges"]}


def tri():
    return {
        "layers": [{"id": 1, "nodes": ["u1", "u2"]}, {"id": 2, "nodes": ["v1"]}],
        "intra_edges": [{"layer": 1, "id": "e1", "tail": "u1", "head": "u2"}],
        "cross_edges": [
            {"layers": [1, 2], "id": "x1", "tail": "u1", "head": "v1"},
            {"layers": [1, 2], "id": "x2", "tail": "u2", "head": "v1"},
        ],
        "two_cells": [{
            "scope": [1, 2],
            "id": "T",
            "boundary": [{"edge_id": "x1", "sign": -1}, {"edge_id": "x2", "sign": 1}, {"edge_id": "e1", "sign": 1}],
        }],
    }


def fig2():
    # layer 1: seven nodes, ten edges; the first edge 1->2 bounds the filled cell
    l1 = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 6), (6, 7), (7, 3), (2, 6), (4, 7)]
    spec = {
        "layers": [{"id": 1, "nodes": [str(i) for i in range(1, 8)]},
                   {"id": 2, "nodes": [str(i) for i in range(8, 12)]}],
        "intra_edges": [_edge(1, a, b) for a, b in l1] + [_edge(2, 8, 9), _edge(2, 9, 10), _edge(2, 10, 11)],
        "cross_edges": [_cross(1, 2, a, b) for a, b in [(1, 8), (2, 8), (3, 9), (5, 10), (6, 10), (7, 11)]],
        "two_cells": [],
    }
    spec["two_cells"].append(_cycle("c1", [1, 2], [1, 2, 8], _orient(spec)))
    return spec


def fig3():
    # layer 1: node 4 isolated, path 5-6-8; layer 2: hubs 10 and 13.
    # The (0,1) cell on 5-10-13 fills the wedge whose apex is node 5.
    spec = {
        "layers": [{"id": 1, "nodes": ["4", "5", "6", "8"]}, {"id": 2, "nodes": ["10", "13"]}],
        "intra_edges": [_edge(1, 5, 6), _edge(1, 6, 8), _edge(2, 10, 13)],
        "cross_edges": [_cross(1, 2, a, b) for a, b in [(4, 10), (5, 10), (5, 13), (8, 13)]],
        "two_cells": [],
    }
    spec["two_cells"].append(_cycle("c5", [1, 2], [5, 10, 13], _orient(spec)))
    return spec


def f3():
    """27 nodes on three layers of nine.

    Layer 1 is a triangulated 3x3 grid coned from both layer-2 nodes 10 and
    11 (every wedge over a layer-1 edge filled).  Layer 2 has two triangulated
    components.  Between layers 2 and 3 the hubs 12 and 13 close two empty
    triangles (the monocomplex holes), hub 14 closes a filled (0,1) cell and
    hub 15 joins two separate layer-3 components (an open cone).
    """
    grid = {(r, c): 1 + 3 * r + c for r in range(3) for c in range(3)}
    l1_edges, l1_tris = [], []
    for (r, c), v in grid.items():
        if c < 2:
            l1_edges.append((v, grid[(r, c + 1)]))
        if r < 2:
            l1_edges.append((v, grid[(r + 1, c)]))
        if r < 2 and c < 2:
            l1_edges.append((v, grid[(r + 1, c + 1)]))
            l1_tris.append([v, grid[(r, c + 1)], grid[(r + 1, c + 1)]])
            l1_tris.append([v, grid[(r + 1, c + 1)], grid[(r + 1, c)]])
    comp_a = [10, 12, 13, 16, 17]
    comp_b = [11, 14, 15, 18]
    l2_edges = [p for p in combinations(comp_a, 2) if p != (16, 17)] + list(combinations(comp_b, 2))
    l2_tris = [[10, 12, 16], [12, 13, 16], [10, 16, 13], [10, 17, 12], [12, 17, 13],
               [11, 14, 18], [14, 15, 18], [11, 18, 15]]
    l3_edges = [(19, 20), (21, 24), (22, 23), (25, 26)]
    x12 = [(v, hub) for hub in (10, 11) for v in range(1, 10)]
    x23 = [(12, 19), (12, 20), (13, 21), (13, 24), (14, 22), (14, 23), (15, 25), (15, 27)]
    spec = {
        "layers": [{"id": l, "nodes": [str(v) for v in range(9 * l - 8, 9 * l + 1)]} for l in (1, 2, 3)],
        "intra_edges": [_edge(1, a, b) for a, b in l1_edges]
        + [_edge(2, a, b) for a, b in l2_edges]
        + [_edge(3, a, b) for a, b in l3_edges],
        "cross_edges": [_cross(1, 2, a, b) for a, b in x12] + [_cross(2, 3, a, b) for a, b in x23],
        "two_cells": [],
    }
    orient = _orient(spec)
    cells = spec["two_cells"]
    for i, t in enumerate(l1_tris):
        cells.append(_cycle(f"t1_{i}", [1], t, orient))
    for i, t in enumerate(l2_tris):
        cells.append(_cycle(f"t2_{i}", [2], t, orient))
    for hub in (10, 11):
        for a, b in l1_edges:
            cells.append(_cycle(f"c{hub}_{a}_{b}", [1, 2], [a, b, hub], orient))
    cells.append(_cycle("c14_22_23", [2, 3], [22, 23, 14], orient))
    return spec


def f3_manifest(X):
    flat = X.flatten()
    _, L1 = hodge_laplacians(X)
    return {
        "N": flat.N,
        "E": flat.E,
        "C": flat.C,
        "harmonic_dim_L1": eig_sym(L1, psd=True).kernel_dim(),
        "cross_betti_00": {f"{l},{m}": cross_betti(X, l, m, 0, 0).as_dict() for l, m in X.cross_pairs()},
        "cross_edges": {f"{l},{m}": X.cell_count(l, m, 0, 0) for l, m in X.cross_pairs()},
    }


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    for name, make in (("tri", tri), ("fig2", fig2), ("fig3", fig3), ("f3", f3)):
        X = build_complex(make())
        write_complex(X, DATA / f"{name}.json")
        if name == "f3":
            write_json(DATA / "f3_manifest.json", f3_manifest(X))
            print(canonical_json(f3_manifest(X)))


if __name__ == "__main__":
    main()
