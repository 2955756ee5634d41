"""Inferring filled cross-cells from observed cross-edge flows.

A candidate cell is a wedge of two cross-edges at a hub node closed by a
shortest intra-layer path on the opposite layer.  Candidates whose cycle
carries the least circulation of the observed (gradient-free) flows are
selected as filled cells.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx
import numpy as np

from .boundary import cross_boundary_from_ell, cross_boundary_from_m
from .complex import CellMultiComplex, build_complex, to_spec
from .errors import GammaTooLarge, InputError, ZeroHarmonic, ZeroSignal
from .laplacians import check_perspective, cone_count_oracle
from .spectral import ZERO_TOL, eig_sym, numerical_rank

ETA_THRESHOLD = 0.05
PMAX = 2


@dataclass(frozen=True, eq=False)
class CandidateCell:
    hub: str
    edges: tuple[str, str]
    path: tuple[tuple[str, int], ...]
    cross_signs: tuple[int, int]
    column: np.ndarray = field(repr=False)

    @property
    def boundary(self) -> tuple[tuple[str, int], ...]:
        """Signed boundary of the closed cycle: path, then the two cross-edges."""
        (ea, eb), (sa, sb) = self.edges, self.cross_signs
        return self.path + ((eb, sb), (ea, sa))

    def as_dict(self) -> dict:
        return {
            "hub": self.hub,
            "cross_edges": list(self.edges),
            "boundary": [{"edge_id": e, "sign": s} for e, s in self.boundary],
        }


def _hub_and_path_layers(l: int, m: int, perspective: str) -> tuple[int, int]:
    return (m, l) if check_perspective(perspective) == "ell" else (l, m)


def _layer_graph(X: CellMultiComplex, layer: int) -> tuple[nx.Graph, dict[frozenset, str]]:
    G = nx.Graph()
    G.add_nodes_from(X.nodes(layer))
    first: dict[frozenset, str] = {}
    for e in X.intra(layer, 1):
        a, b = X.endpoints(e)
        key = frozenset((a, b))
        if key not in first:
            first[key] = e
            G.add_edge(a, b)
    return G, first


def enumerate_candidates(
    X: CellMultiComplex, l: int, m: int, pmax: int = PMAX, perspective: str = "ell"
) -> list[CandidateCell]:
    """Every wedge whose far endpoints are joined by a shortest path of length <= pmax.

    Hubs, edge pairs and paths are visited in canonical order, so the list
    is deterministic.  Cycles that already bound a filled cell are skipped.
    """
    hub_layer, path_layer = _hub_and_path_layers(l, m, perspective)
    cross = X.family(l, m, 0, 0)
    pos = {e: i for i, e in enumerate(cross)}
    G, edge_of = _layer_graph(X, path_layer)
    edge_rank = {e: i for i, e in enumerate(X.intra(path_layer, 1))}

    existing = set()
    for cid in X.family(l, m, 1, 0) + X.family(l, m, 0, 1):
        bnd = frozenset(X.cell(cid).boundary)
        existing.add(bnd)
        existing.add(frozenset((f, -s) for f, s in bnd))

    at: dict[str, list[str]] = {v: [] for v in X.nodes(hub_layer)}
    for e in cross:
        a, b = X.endpoints(e)
        at[a if X.layer_of(a) == hub_layer else b].append(e)

    out: list[CandidateCell] = []
    for hub, es in at.items():
        for ea, eb in combinations(es, 2):
            ua = _far(X, ea, hub)
            ub = _far(X, eb, hub)
            if ua == ub:
                continue
            try:
                d = nx.shortest_path_length(G, ua, ub)
            except nx.NetworkXNoPath:
                continue
            if d > pmax:
                continue
            paths = []
            for nodes in nx.all_shortest_paths(G, ua, ub):
                steps = []
                for s, t in zip(nodes, nodes[1:]):
                    e = edge_of[frozenset((s, t))]
                    steps.append((e, 1 if X.endpoints(e) == (s, t) else -1))
                paths.append(tuple(steps))
            paths.sort(key=lambda p: [edge_rank[e] for e, _ in p])
            for path in paths:
                # cycle: ua -> ub along the path, ub -> hub on eb, hub -> ua on ea
                sa = 1 if X.endpoints(ea) == (hub, ua) else -1
                sb = 1 if X.endpoints(eb) == (ub, hub) else -1
                col = np.zeros(len(cross))
                col[pos[ea]], col[pos[eb]] = sa, sb
                cand = CandidateCell(hub, (ea, eb), path, (sa, sb), col)
                if frozenset(cand.boundary) in existing:
                    continue
                out.append(cand)
    return out


def _far(X: CellMultiComplex, e: str, hub: str) -> str:
    a, b = X.endpoints(e)
    return b if a == hub else a


def _divergence_boundary(X: CellMultiComplex, l: int, m: int, perspective: str) -> np.ndarray:
    if check_perspective(perspective) == "ell":
        return cross_boundary_from_ell(X, l, m, 0, 0).astype_float()
    return cross_boundary_from_m(X, l, m, 0, 0).astype_float()


def curl_energy_ratio(
    X: CellMultiComplex, l: int, m: int, X1, perspective: str = "ell", zero_tol: float = ZERO_TOL
) -> tuple[float, np.ndarray]:
    """Share of signal energy outside the gradient subspace, and the projected signals."""
    Y = np.asarray(X1, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    D = _divergence_boundary(X, l, m, perspective)
    if Y.shape[0] != D.shape[1]:
        raise InputError(f"signals have {Y.shape[0]} rows, expected {D.shape[1]} cross-edges")
    total = float(np.sum(Y * Y))
    if total == 0:
        raise ZeroSignal("cross-edge signals are identically zero")
    d = eig_sym(D.T @ D, zero_tol, psd=True)
    Ud = d.eigenvectors[:, ~d.zero_mask()]
    X10 = Y - Ud @ (Ud.T @ Y)
    return float(np.sum(X10 * X10) / total), X10


def alpha_coefficients(candidates: list[CandidateCell], X10) -> np.ndarray:
    """Circulation energy ``||b_k^T X10||^2`` of each candidate."""
    Y = np.asarray(X10, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    if not candidates:
        return np.zeros(0)
    Bc = np.column_stack([c.column for c in candidates])
    return np.sum((Bc.T @ Y) ** 2, axis=1)


@dataclass(frozen=True, eq=False)
class LearnResult:
    candidates: list[CandidateCell]
    selected: tuple[int, ...]
    alpha: np.ndarray
    eta: float | None
    gated: bool
    B_hat: np.ndarray
    L_u_hat: np.ndarray
    L_hat: np.ndarray
    rank_deficient: bool

    @property
    def a(self) -> np.ndarray:
        v = np.zeros(len(self.candidates), dtype=int)
        v[list(self.selected)] = 1
        return v

    @property
    def selected_cells(self) -> list[CandidateCell]:
        return [self.candidates[i] for i in self.selected]

    def as_dict(self) -> dict:
        return {
            "eta": self.eta,
            "gated": self.gated,
            "rank_deficient": self.rank_deficient,
            "selected": [{"candidate": i, **self.candidates[i].as_dict()} for i in self.selected],
            "alpha": [
                {"candidate": i, "hub": c.hub, "cross_edges": list(c.edges), "alpha": float(a)}
                for i, (c, a) in enumerate(zip(self.candidates, self.alpha))
            ],
        }


def select_cells(
    candidates: list[CandidateCell],
    alpha,
    gamma: int | None = None,
    threshold: float | None = None,
    lower: np.ndarray | None = None,
    eta: float | None = None,
    n_cross: int | None = None,
) -> LearnResult:
    """Pick the ``gamma`` lowest-circulation candidates, or all below ``threshold``.

    Ties keep canonical candidate order.  ``lower`` is the lower
    cross-Laplacian added to the learned upper part to form ``L_hat``.
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (len(candidates),):
        raise InputError("one alpha value per candidate is required")
    if (gamma is None) == (threshold is None):
        raise InputError("give exactly one of gamma or threshold")
    order = sorted(range(len(candidates)), key=lambda i: (alpha[i], i))
    if gamma is not None:
        if gamma < 0:
            raise InputError(f"gamma must be non-negative, got {gamma}")
        if gamma > len(candidates):
            raise GammaTooLarge(f"gamma={gamma} exceeds the {len(candidates)} candidates")
        chosen = order[:gamma]
    else:
        chosen = [i for i in order if alpha[i] < threshold]
    chosen = tuple(sorted(chosen))
    if n_cross is None:
        n_cross = candidates[0].column.size if candidates else (0 if lower is None else lower.shape[0])
    return _result(candidates, chosen, alpha, eta, False, lower, n_cross)


def _result(candidates, chosen, alpha, eta, gated, lower, n_cross) -> LearnResult:
    if chosen:
        B = np.column_stack([candidates[i].column for i in chosen])
    else:
        B = np.zeros((n_cross, 0))
    Lu = B @ B.T
    Ld = np.zeros_like(Lu) if lower is None else lower
    deficient = bool(chosen) and numerical_rank(B) < len(chosen)
    return LearnResult(list(candidates), chosen, alpha, eta, gated, B, Lu, Ld + Lu, deficient)


def learn_topology(
    X: CellMultiComplex,
    l: int,
    m: int,
    X1,
    gamma: int | None = None,
    threshold: float | None = None,
    pmax: int = PMAX,
    eta_threshold: float = ETA_THRESHOLD,
    perspective: str = "ell",
) -> LearnResult:
    """Gate on curl energy, enumerate candidates, rank by circulation, select."""
    eta, X10 = curl_energy_ratio(X, l, m, X1, perspective)
    D = _divergence_boundary(X, l, m, perspective)
    lower = D.T @ D
    candidates = enumerate_candidates(X, l, m, pmax, perspective)
    alpha = alpha_coefficients(candidates, X10)
    if eta < eta_threshold:
        return _result(candidates, (), alpha, eta, True, lower, D.shape[1])
    if gamma is not None and gamma > len(candidates):
        raise GammaTooLarge(f"gamma={gamma} exceeds the {len(candidates)} candidates")
    return select_cells(candidates, alpha, gamma, threshold, lower, eta, D.shape[1])


def learned_complex(X: CellMultiComplex, l: int, m: int, result: LearnResult, prefix: str = "learned") -> CellMultiComplex:
    """``X`` with the selected candidates added as filled cross-cells."""
    spec = to_spec(X)
    taken = set(X.cells)
    for n, cand in enumerate(result.selected_cells):
        cid = f"{prefix}{n}"
        while cid in taken:
            cid += "_"
        taken.add(cid)
        spec["two_cells"].append({
            "scope": [l, m],
            "id": cid,
            "boundary": [{"edge_id": e, "sign": s} for e, s in cand.boundary],
        })
    return build_complex(spec)


def cross_hub_intensity(
    X: CellMultiComplex, l: int, m: int, x_h, hub_layer: int | None = None
) -> dict[str, float]:
    """Summed harmonic magnitude on each hub's cone edges over the peak magnitude."""
    cross = X.family(l, m, 0, 0)
    x = np.asarray(x_h, dtype=float)
    if x.shape != (len(cross),):
        raise InputError(f"harmonic signal needs {len(cross)} entries, got shape {x.shape}")
    peak = float(np.abs(x).max()) if x.size else 0.0
    if peak == 0:
        raise ZeroHarmonic("harmonic signal is identically zero")
    pos = {e: i for i, e in enumerate(cross)}
    report = cone_count_oracle(X, l, m, hub_layer)
    out = {}
    for node in X.nodes(report.hub_layer):
        edges = {e for w in report.cones.get(node, []) for e in w.edges}
        out[node] = float(sum(abs(x[pos[e]]) for e in edges) / peak)
    return out


def planted_corpus(
    X: CellMultiComplex,
    l: int,
    m: int,
    planted: list[int],
    M: int,
    seed: int = 0,
    pmax: int = PMAX,
    perspective: str = "ell",
) -> np.ndarray:
    """Cross-edge signals with zero circulation on the planted candidates.

    Each column is a random gradient flow plus a random flow orthogonal to
    both the gradient space and the planted candidate cycles, so planted
    cells have ``alpha = 0`` and any candidate outside their span has
    ``alpha > 0`` almost surely.
    """
    candidates = enumerate_candidates(X, l, m, pmax, perspective)
    D = _divergence_boundary(X, l, m, perspective)
    Bp = np.column_stack([candidates[i].column for i in planted]) if planted else np.zeros((D.shape[1], 0))
    d = eig_sym(D.T @ D + Bp @ Bp.T, psd=True)
    Z = d.eigenvectors[:, d.zero_mask()]
    rng = np.random.default_rng(seed)
    S0 = rng.standard_normal((D.shape[0], M))
    return D.T @ S0 + Z @ rng.standard_normal((Z.shape[1], M))
