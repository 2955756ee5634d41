"""Hodge Laplacians, cross-Laplacians, cross-Betti numbers and cones."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np

from .boundary import cross_boundary_from_ell, cross_boundary_from_m, mono_b1, mono_b2
from .complex import CellMultiComplex, layer_graph_components
from .errors import DependentCells, InputError, UnsupportedOrderPair
from .spectral import ZERO_TOL, EigenDecomposition, eig_sym, numerical_rank

PERSPECTIVES = ("ell", "m")


def check_perspective(perspective: str) -> str:
    if perspective not in PERSPECTIVES:
        raise InputError(f"perspective must be 'ell' or 'm', got {perspective!r}")
    return perspective


def hodge_laplacians(X: CellMultiComplex) -> tuple[np.ndarray, np.ndarray]:
    """``(L0, L1)`` of the flattened complex."""
    B1 = mono_b1(X).astype_float()
    B2 = mono_b2(X).astype_float()
    return B1 @ B1.T, B1.T @ B1 + B2 @ B2.T


def lower_upper_mono(X: CellMultiComplex) -> tuple[np.ndarray, np.ndarray]:
    B1 = mono_b1(X).astype_float()
    B2 = mono_b2(X).astype_float()
    return B1.T @ B1, B2 @ B2.T


@dataclass(frozen=True, eq=False)
class CrossLaplacian:
    lower: np.ndarray
    upper: np.ndarray
    index: tuple[str, ...]
    perspective: str
    orders: tuple[int, int]
    layers: tuple[int, int]
    zero_tol: float = field(default=ZERO_TOL, repr=False)

    @property
    def total(self) -> np.ndarray:
        return self.lower + self.upper

    @cached_property
    def eig(self) -> EigenDecomposition:
        return eig_sym(self.total, self.zero_tol, psd=True)

    @cached_property
    def eig_lower(self) -> EigenDecomposition:
        return eig_sym(self.lower, self.zero_tol, psd=True)

    def kernel_dim(self) -> int:
        return self.eig.kernel_dim()


def cross_boundaries(X: CellMultiComplex, l: int, m: int, k: int, n: int, perspective: str):
    """The (lower, upper) boundary pair a cross-Laplacian is built from."""
    if check_perspective(perspective) == "ell":
        return cross_boundary_from_ell(X, l, m, k, n), cross_boundary_from_ell(X, l, m, k + 1, n)
    return cross_boundary_from_m(X, l, m, k, n), cross_boundary_from_m(X, l, m, k, n + 1)


def cross_laplacian(
    X: CellMultiComplex, l: int, m: int, k: int, n: int, perspective: str = "ell",
    zero_tol: float = ZERO_TOL,
) -> CrossLaplacian:
    """``(k, n)``-cross-Laplacian from the chosen layer's perspective."""
    lo, up = cross_boundaries(X, l, m, k, n, perspective)
    Bl, Bu = lo.astype_float(), up.astype_float()
    return CrossLaplacian(
        lower=Bl.T @ Bl,
        upper=Bu @ Bu.T,
        index=lo.cols,
        perspective=perspective,
        orders=(k, n),
        layers=(l, m),
        zero_tol=zero_tol,
    )


@dataclass(frozen=True)
class CrossBetti:
    beta_ell: int
    beta_m: int

    def as_dict(self) -> dict[str, int]:
        return {"beta_ell": self.beta_ell, "beta_m": self.beta_m}


SUPPORTED_BETTI = {(0, -1), (-1, 0), (0, 0)}


def cross_betti(X: CellMultiComplex, l: int, m: int, k: int, n: int, zero_tol: float = ZERO_TOL) -> CrossBetti:
    if (k, n) not in SUPPORTED_BETTI:
        raise UnsupportedOrderPair(
            f"cross-Betti numbers are only interpreted for {sorted(SUPPORTED_BETTI)}, got ({k}, {n})"
        )
    return CrossBetti(
        cross_laplacian(X, l, m, k, n, "ell", zero_tol).kernel_dim(),
        cross_laplacian(X, l, m, k, n, "m", zero_tol).kernel_dim(),
    )


# -------------------------------------------------------------------------
# cones
# -------------------------------------------------------------------------

@dataclass(frozen=True)
class Wedge:
    """Two cross-edges meeting at a hub node on the opposite layer."""

    hub: str
    edges: tuple[str, str]
    ends: tuple[str, str]
    closed: bool


@dataclass(frozen=True)
class ConeReport:
    count: int
    hub_layer: int
    cones: dict[str, list[Wedge]]
    wedges: dict[str, list[Wedge]]

    @property
    def n_open(self) -> int:
        return sum(not w.closed for ws in self.cones.values() for w in ws)

    @property
    def n_closed(self) -> int:
        return sum(w.closed for ws in self.cones.values() for w in ws)


def cross_edges_at(X: CellMultiComplex, l: int, m: int, hub_layer: int) -> dict[str, list[tuple[str, str]]]:
    """Hub node -> list of ``(cross_edge, far_endpoint)`` in canonical order."""
    out: dict[str, list[tuple[str, str]]] = {v: [] for v in X.nodes(hub_layer)}
    for e in X.family(l, m, 0, 0):
        a, b = X.endpoints(e)
        hub, far = (a, b) if X.layer_of(a) == hub_layer else (b, a)
        out[hub].append((e, far))
    return out


def _filled_family(l: int, m: int, hub_layer: int) -> tuple[int, int]:
    return (1, 0) if hub_layer == m else (0, 1)


def cone_count_oracle(
    X: CellMultiComplex, l: int, m: int, hub_layer: int | None = None, zero_tol: float = ZERO_TOL
) -> ConeReport:
    """Combinatorial cone count with per-hub independent wedges.

    The count is ``N_00 - n_0 - N_filled`` where ``n_0`` is the number of
    hub-layer nodes touched by cross-edges.  Each hub's cones are picked
    greedily (consecutive edge pairs first) among wedges that raise the rank
    of the span of the filled cells' columns at that hub.
    """
    X._check_pair(l, m)
    hub_layer = m if hub_layer is None else hub_layer
    if hub_layer not in (l, m):
        raise InputError(f"hub layer must be {l} or {m}, got {hub_layer}")
    far_layer = l if hub_layer == m else m
    cross = X.family(l, m, 0, 0)
    kf = _filled_family(l, m, hub_layer)
    filled = X.family(l, m, *kf)
    B = (cross_boundary_from_ell(X, l, m, *kf) if hub_layer == m else cross_boundary_from_m(X, l, m, *kf))
    Bf = B.astype_float()
    # orientation of each cross-edge at its hub, so wedges are true cycles
    D = (cross_boundary_from_ell(X, l, m, 0, 0) if hub_layer == m else cross_boundary_from_m(X, l, m, 0, 0))
    Dd, hub_row = D.dense(), D.row_index()
    if numerical_rank(Bf, zero_tol) < len(filled):
        raise DependentCells("filled cross-cell columns are linearly dependent; the cone count needs independence")

    at = cross_edges_at(X, l, m, hub_layer)
    n0 = sum(1 for es in at.values() if es)
    count = len(cross) - n0 - len(filled)
    comp = layer_graph_components(X, far_layer)
    pos = {e: i for i, e in enumerate(cross)}

    cones: dict[str, list[Wedge]] = {}
    wedges: dict[str, list[Wedge]] = {}
    for hub, es in at.items():
        if len(es) < 2:
            continue
        idx = [pos[e] for e, _ in es]
        sign = [Dd[hub_row[hub], i] for i in idx]
        span = [Bf[idx, j] for j in range(Bf.shape[1]) if np.any(Bf[idx, j])]
        rank = numerical_rank(np.array(span), zero_tol) if span else 0
        pairs = [(i, i + 1) for i in range(len(es) - 1)]
        pairs += [p for p in combinations(range(len(es)), 2) if p[1] != p[0] + 1]
        mk = lambda i, j: Wedge(  # noqa: E731
            hub, (es[i][0], es[j][0]), (es[i][1], es[j][1]), comp[es[i][1]] == comp[es[j][1]]
        )
        wedges[hub] = [mk(i, j) for i, j in combinations(range(len(es)), 2)]
        chosen = []
        for i, j in pairs:
            if rank >= len(es) - 1:
                break
            v = np.zeros(len(es))
            v[i], v[j] = sign[i], -sign[j]
            trial = span + [v]
            r = numerical_rank(np.array(trial), zero_tol)
            if r > rank:
                span, rank = trial, r
                chosen.append(mk(i, j))
        if chosen:
            cones[hub] = chosen
    return ConeReport(count, hub_layer, cones, wedges)


@dataclass(frozen=True)
class CrossHub:
    node: str
    open_cones: int
    closed_cones: int

    @property
    def critical(self) -> bool:
        """Open-cone hubs bridge otherwise disconnected clusters."""
        return self.open_cones > 0


def harmonic_cross_hubs(X: CellMultiComplex, l: int, m: int, hub_layer: int | None = None) -> list[CrossHub]:
    report = cone_count_oracle(X, l, m, hub_layer)
    hubs = []
    for node in X.nodes(report.hub_layer):
        ws = report.cones.get(node, [])
        if ws:
            n_open = sum(not w.closed for w in ws)
            hubs.append(CrossHub(node, n_open, len(ws) - n_open))
    return hubs
