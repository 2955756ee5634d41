"""Random complexes, random signals and the two Monte Carlo experiments.

All randomness flows from one integer seed.  Trial ``j`` of an experiment
draws from the ``j``-th child of ``SeedSequence(seed)``, so results do not
depend on how trials are spread over worker threads.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from .boundary import mono_b1, mono_b2
from .complex import CellMultiComplex, build_complex
from .errors import DegenerateConfig, InputError
from .learn import enumerate_candidates
from .signals import average_nmse, cross_operators, split
from .sparse import sparsity_curve
from .spectral import eig_sym


@dataclass(frozen=True)
class RandomCmcConfig:
    layer_nodes: tuple[int, ...] = (5, 5)
    p_intra: float = 0.4
    p_cross: float = 0.3
    p_fill: float = 0.0
    p_fill_intra: float = 0.0
    pmax: int = 1
    seed: int = 0
    independent: bool = True
    all_pairs: bool = False
    random_orientation: bool = True
    require_cross: bool = False

    def __post_init__(self):
        for name in ("p_intra", "p_cross", "p_fill", "p_fill_intra"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise InputError(f"{name} must lie in [0, 1], got {p}")
        if not self.layer_nodes or min(self.layer_nodes) < 1:
            raise InputError("every layer needs at least one node")
        if self.pmax < 1:
            raise InputError("pmax must be at least 1")


def _layer_pairs(n_layers: int, all_pairs: bool) -> list[tuple[int, int]]:
    if all_pairs:
        return list(combinations(range(1, n_layers + 1), 2))
    return [(l, l + 1) for l in range(1, n_layers)]


def random_cmc(cfg: RandomCmcConfig) -> CellMultiComplex:
    """Random complex whose filled cross-cells are drawn from enumerated candidates.

    With ``independent=True`` a candidate is kept only if its wedge closes no
    cycle among the wedges already filled at the same hub, which keeps the
    filled-cell columns linearly independent.
    """
    rng = np.random.default_rng(cfg.seed)
    flip = (lambda: rng.random() < 0.5) if cfg.random_orientation else (lambda: False)
    spec: dict = {"layers": [], "intra_edges": [], "cross_edges": [], "two_cells": []}
    nodes = {}
    for l, count in enumerate(cfg.layer_nodes, start=1):
        nodes[l] = [f"n{l}_{i}" for i in range(count)]
        spec["layers"].append({"id": l, "nodes": nodes[l]})

    adjacency: dict[int, dict[tuple[int, int], str]] = {}
    for l, ids in nodes.items():
        adjacency[l] = {}
        for i, j in combinations(range(len(ids)), 2):
            if rng.random() < cfg.p_intra:
                eid = f"e{l}_{i}_{j}"
                tail, head = (ids[j], ids[i]) if flip() else (ids[i], ids[j])
                spec["intra_edges"].append({"layer": l, "id": eid, "tail": tail, "head": head})
                adjacency[l][(i, j)] = eid
    for l, m in _layer_pairs(len(cfg.layer_nodes), cfg.all_pairs):
        for i, u in enumerate(nodes[l]):
            for j, v in enumerate(nodes[m]):
                if rng.random() < cfg.p_cross:
                    tail, head = (v, u) if flip() else (u, v)
                    spec["cross_edges"].append({"layers": [l, m], "id": f"x{l}_{m}_{i}_{j}", "tail": tail, "head": head})
    if cfg.require_cross and not spec["cross_edges"]:
        raise DegenerateConfig("configuration produced no cross-edges")

    # intra triangles
    if cfg.p_fill_intra > 0:
        for l, ids in nodes.items():
            adj = adjacency[l]
            for i, j, k in combinations(range(len(ids)), 3):
                if (i, j) in adj and (j, k) in adj and (i, k) in adj and rng.random() < cfg.p_fill_intra:
                    cycle = [(ids[i], ids[j], adj[(i, j)]), (ids[j], ids[k], adj[(j, k)]), (ids[k], ids[i], adj[(i, k)])]
                    bnd = []
                    for s, t, e in cycle:
                        rec = next(r for r in spec["intra_edges"] if r["id"] == e)
                        bnd.append({"edge_id": e, "sign": 1 if (rec["tail"], rec["head"]) == (s, t) else -1})
                    if flip():
                        bnd = [{"edge_id": b["edge_id"], "sign": -b["sign"]} for b in bnd]
                    spec["two_cells"].append({"scope": [l], "id": f"t{l}_{i}_{j}_{k}", "boundary": bnd})

    if cfg.p_fill > 0 and spec["cross_edges"]:
        base = build_complex(spec)
        n = 0
        for l, m in base.cross_pairs():
            for perspective in ("ell", "m"):
                forests: dict[str, dict[str, str]] = {}
                for cand in enumerate_candidates(base, l, m, cfg.pmax, perspective):
                    if rng.random() >= cfg.p_fill:
                        continue
                    if cfg.independent:
                        parent = forests.setdefault(cand.hub, {})
                        ra, rb = _find(parent, cand.edges[0]), _find(parent, cand.edges[1])
                        if ra == rb:
                            continue
                        parent[rb] = ra
                    sign = -1 if flip() else 1
                    spec["two_cells"].append({
                        "scope": [l, m],
                        "id": f"c{l}_{m}_{n}",
                        "boundary": [{"edge_id": e, "sign": sign * s} for e, s in cand.boundary],
                    })
                    n += 1
    return build_complex(spec)


def _find(parent: dict[str, str], x: str) -> str:
    parent.setdefault(x, x)
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


# --- signals -----------------------------------------------------------------

def trial_streams(seed: int, M: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(M)]


@dataclass(frozen=True, eq=False)
class SignalSet:
    """``values`` has one column per trial; ``components`` is filled for model draws."""

    values: np.ndarray
    index: tuple[str, ...]
    components: dict[str, np.ndarray] = field(default_factory=dict)


def harmonic_basis(D: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ``ker(D) ∩ ker(C^T)``."""
    d = eig_sym(D.T @ D + C @ C.T, psd=True)
    return d.eigenvectors[:, d.zero_mask()]


def gen_signals(
    X: CellMultiComplex,
    model: str = "gaussian_edge",
    M: int = 1,
    seed: int = 0,
    layers: tuple[int, int] | None = None,
    perspective: str = "ell",
    sigmas: tuple[float, float, float] = (1.0, 1.0, 1.0),
) -> SignalSet:
    """Random signals, one column per trial.

    ``gaussian_edge`` draws i.i.d. standard normal values on every flattened
    edge.  ``hodge_model`` draws a node potential, a filled-cell potential
    and harmonic coefficients with standard deviations ``sigmas`` and
    assembles the cross-edge signal of ``layers`` from them; with
    ``layers=None`` the flattened complex is used instead.
    """
    if M < 1:
        raise InputError("M must be positive")
    streams = trial_streams(seed, M)
    if model == "gaussian_edge":
        edges = X.flatten().edges
        return SignalSet(np.column_stack([g.standard_normal(len(edges)) for g in streams]), edges)
    if model != "hodge_model":
        raise InputError(f"unknown signal model {model!r}")
    if layers is None:
        Db, Cb = mono_b1(X), mono_b2(X)
    else:
        Db, Cb = cross_operators(X, layers[0], layers[1], perspective)
    D, C = Db.astype_float(), Cb.astype_float()
    H = harmonic_basis(D, C)
    s_irr, s_sol, s_har = sigmas
    parts = {"irrotational": [], "solenoidal": [], "harmonic": []}
    for g in streams:
        parts["irrotational"].append(D.T @ (s_irr * g.standard_normal(D.shape[0])))
        parts["solenoidal"].append(C @ (s_sol * g.standard_normal(C.shape[1])))
        parts["harmonic"].append(H @ (s_har * g.standard_normal(H.shape[1])))
    comps = {k: np.column_stack(v) for k, v in parts.items()}
    total = comps["irrotational"] + comps["solenoidal"] + comps["harmonic"]
    return SignalSet(total, Db.cols, comps)


# --- experiments ---------------------------------------------------------------

@dataclass
class ExperimentReport:
    config: dict
    columns: list[str]
    rows: list[list]
    runtime: float = 0.0


def _map(fn, items, n_jobs: int):
    if n_jobs <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, items))


def denoise_experiment(
    X: CellMultiComplex,
    l: int,
    m: int,
    M: int,
    snr_grid_db=(0, 5, 10, 15, 20),
    seed: int = 0,
    perspective: str = "m",
    n_jobs: int = 1,
) -> ExperimentReport:
    """NMSE of cross-edge component estimates versus SNR, cross vs monocomplex.

    Each trial draws the three components of the chosen perspective's
    model with random directions inside their subspaces and equal fixed
    energies, so the cross-edge signal has unit power per edge; all other
    edges carry standard normal values.  Fixing the energies keeps the
    per-trial error ratios bounded: with a Gaussian amplitude on a
    one-dimensional component the ratio has no finite mean.  One white
    noise draw per trial is rescaled for every SNR point.  The cross estimator sees only
    the cross-edges; the monocomplex estimator splits the full edge signal
    over ``B1``/``B2`` and is then restricted to the cross-edges.
    """
    start = time.perf_counter()
    D, C = (b.astype_float() for b in cross_operators(X, l, m, perspective))
    H = harmonic_basis(D, C)
    B1, B2 = mono_b1(X).astype_float(), mono_b2(X).astype_float()
    edges = X.flatten().edges
    cross = X.family(l, m, 0, 0)
    if not cross:
        raise DegenerateConfig(f"layers ({l}, {m}) share no cross-edges")
    pos = {e: i for i, e in enumerate(edges)}
    mask = np.array([pos[e] for e in cross])
    snrs = [float(s) for s in snr_grid_db]
    streams = trial_streams(seed, M)

    def trial(j: int):
        g = streams[j]
        parts = [D.T @ g.standard_normal(D.shape[0]), C @ g.standard_normal(C.shape[1]),
                 H @ g.standard_normal(H.shape[1])]
        norms = [np.linalg.norm(p) for p in parts]
        # empty subspaces get no share of the energy
        share = np.sqrt(len(cross) / sum(n > 0 for n in norms))
        irr, sol, har = (p * (share / n) if n > 0 else p for p, n in zip(parts, norms))
        y_clean = g.standard_normal(len(edges))
        y_clean[mask] = irr + sol + har
        noise = g.standard_normal(len(edges))
        out = []
        for snr in snrs:
            y = y_clean + noise * np.sqrt(10 ** (-snr / 10))
            c_irr, c_sol, *_ = split(y[mask], D, C)
            m_irr, m_sol, *_ = split(y, B1, B2)
            out.append((c_irr, c_sol, m_irr[mask], m_sol[mask]))
        return irr, sol, out

    results = _map(trial, range(M), n_jobs)
    truth_irr = np.column_stack([r[0] for r in results])
    truth_sol = np.column_stack([r[1] for r in results])
    columns = ["snr_db", "nmse_irr_cross", "nmse_irr_mono", "nmse_sol_cross", "nmse_sol_mono", "n_trials"]
    rows = []
    for i, snr in enumerate(snrs):
        est = [np.column_stack([r[2][i][q] for r in results]) for q in range(4)]
        rows.append([
            snr,
            average_nmse(est[0], truth_irr),
            average_nmse(est[2], truth_irr),
            average_nmse(est[1], truth_sol),
            average_nmse(est[3], truth_sol),
            M,
        ])
    config = {
        "experiment": "denoise",
        "layers": [l, m],
        "perspective": perspective,
        "trials": M,
        "snr_grid_db": snrs,
        "seed": seed,
    }
    return ExperimentReport(config, columns, rows, time.perf_counter() - start)


def sparsity_experiment(
    X: CellMultiComplex,
    l: int,
    m: int,
    M: int,
    seed: int = 0,
    epsilons=None,
    perspective: str = "m",
) -> ExperimentReport:
    """NMSE versus support size for Gaussian edge signals, mono vs cross basis."""
    start = time.perf_counter()
    if not X.family(l, m, 0, 0):
        raise DegenerateConfig(f"layers ({l}, {m}) share no cross-edges")
    signals = gen_signals(X, "gaussian_edge", M, seed)
    curve = sparsity_curve(X, l, m, signals.values, epsilons, perspective)
    columns = ["sparsity", "nmse_mono", "nmse_cross", "n_trials_mono", "n_trials_cross"]
    rows = [[r.sparsity, r.nmse_mono, r.nmse_cross, r.n_trials_mono, r.n_trials_cross] for r in curve]
    config = {
        "experiment": "sparsity",
        "layers": [l, m],
        "perspective": perspective,
        "trials": M,
        "seed": seed,
        "epsilons": None if epsilons is None else [float(e) for e in epsilons],
    }
    return ExperimentReport(config, columns, rows, time.perf_counter() - start)


def config_dict(cfg: RandomCmcConfig) -> dict:
    d = asdict(cfg)
    d["layer_nodes"] = list(cfg.layer_nodes)
    return d
