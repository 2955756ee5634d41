"""Basis pursuit over Laplacian eigenbases and the sparsity/accuracy sweep."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complex import CellMultiComplex
from .errors import InfeasibleEpsilon, InputError
from .signals import cross_basis, edge_basis

ORTHO_TOL = 1e-10
SUPPORT_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class SparseCode:
    coefficients: np.ndarray
    support: np.ndarray
    residual: float

    @property
    def sparsity(self) -> int:
        return int(self.support.size)

    @property
    def l1(self) -> float:
        return float(np.abs(self.coefficients).sum())


def support_of(coeffs: np.ndarray, rel_tol: float = SUPPORT_TOL) -> np.ndarray:
    top = np.abs(coeffs).max() if coeffs.size else 0.0
    if top == 0:
        return np.zeros(0, dtype=int)
    return np.flatnonzero(np.abs(coeffs) > rel_tol * top)


def soft_threshold(c: np.ndarray, tau: float) -> np.ndarray:
    return np.sign(c) * np.maximum(np.abs(c) - tau, 0.0)


def clip_threshold(c: np.ndarray, delta: float) -> float:
    """Smallest ``tau`` with ``sum(min(|c_i|, tau)^2) = delta^2``.

    Exact: the left side is piecewise quadratic in ``tau`` with breakpoints
    at the sorted ``|c_i|``.
    """
    a = np.sort(np.abs(c))
    n = a.size
    target = delta * delta
    below = 0.0
    for i in range(n):
        # tau in [a[i-1], a[i]]: sum = below + (n - i) tau^2
        top = below + (n - i) * a[i] ** 2
        if top >= target:
            return float(np.sqrt(max(target - below, 0.0) / (n - i)))
        below += a[i] ** 2
    return float(a[-1]) if n else 0.0


def is_orthonormal(U: np.ndarray, tol: float = ORTHO_TOL) -> bool:
    return U.shape[1] <= U.shape[0] and np.abs(U.T @ U - np.eye(U.shape[1])).max() <= tol


def basis_pursuit(U, y, epsilon: float, support_tol: float = SUPPORT_TOL) -> SparseCode:
    """Minimise ``||s||_1`` subject to ``||y - U s|| <= epsilon``.

    Orthonormal dictionaries are solved exactly by soft-thresholding
    ``U^T y`` with the threshold that puts the residual on the constraint.
    Other dictionaries fall back to an iterative LASSO path.
    """
    U = np.asarray(U, dtype=float)
    y = np.asarray(y, dtype=float)
    if epsilon < 0:
        raise InputError(f"epsilon must be non-negative, got {epsilon}")
    if U.ndim != 2 or U.shape[0] != y.shape[0]:
        raise InputError(f"dictionary shape {U.shape} does not match signal length {y.shape[0]}")
    if not is_orthonormal(U):
        return _bp_general(U, y, epsilon, support_tol)
    c = U.T @ y
    r0 = float(np.linalg.norm(y - U @ c))
    slack = 1e-12 * max(1.0, float(np.linalg.norm(y)))
    if r0 > epsilon + slack:
        raise InfeasibleEpsilon(f"epsilon {epsilon:g} is below the out-of-span residual {r0:g}")
    delta = np.sqrt(max(epsilon ** 2 - r0 ** 2, 0.0))
    if delta >= np.linalg.norm(c):
        s = np.zeros_like(c)
    else:
        s = soft_threshold(c, clip_threshold(c, delta))
    return SparseCode(s, support_of(s, support_tol), float(np.linalg.norm(y - U @ s)))


def _lasso(A, y, lam, x0, L, iters=5000, tol=1e-12):
    x = z = x0.copy()
    t = 1.0
    for _ in range(iters):
        x_new = soft_threshold(z - A.T @ (A @ z - y) / L, lam / L)
        t_new = (1 + np.sqrt(1 + 4 * t * t)) / 2
        z = x_new + (t - 1) / t_new * (x_new - x)
        if np.linalg.norm(x_new - x) <= tol * max(1.0, np.linalg.norm(x_new)):
            return x_new
        x, t = x_new, t_new
    return x


def _bp_general(A, y, epsilon, support_tol):
    # LASSO solutions trace the constrained optimum as lambda varies; the
    # residual grows with lambda, so bisect lambda onto the constraint.
    x_ls = np.linalg.lstsq(A, y, rcond=None)[0]
    if np.linalg.norm(y - A @ x_ls) > epsilon + 1e-9 * max(1.0, np.linalg.norm(y)):
        raise InfeasibleEpsilon("epsilon is below the least-squares residual")
    if np.linalg.norm(y) <= epsilon:
        s = np.zeros(A.shape[1])
        return SparseCode(s, support_of(s, support_tol), float(np.linalg.norm(y)))
    L = float(np.linalg.norm(A, 2) ** 2)
    lo, hi = 0.0, float(np.abs(A.T @ y).max())
    x = x_ls
    best = x_ls
    for _ in range(60):
        lam = (lo + hi) / 2
        x = _lasso(A, y, lam, x, L)
        if np.linalg.norm(y - A @ x) <= epsilon:
            lo, best = lam, x
        else:
            hi = lam
        if hi - lo <= 1e-12 * max(hi, 1.0):
            break
    return SparseCode(best, support_of(best, support_tol), float(np.linalg.norm(y - A @ best)))


def scaled_epsilon(epsilon: float, n_cross: int, n_edges: int) -> float:
    """Fitting bound for the cross-edge problem: ``epsilon * n_cross / n_edges``."""
    if n_cross < 0 or n_edges <= 0:
        raise InputError("counts must be positive")
    return epsilon * n_cross / n_edges


# --- sparsity sweep ------------------------------------------------------------

def _path_errors(c: np.ndarray, U: np.ndarray, truth: np.ndarray) -> np.ndarray:
    """``||truth - U soft(c, tau)||`` at each exact support size ``0..n``.

    Support ``k`` is evaluated at the smallest threshold that keeps exactly
    ``k`` atoms, i.e. ``tau`` equal to the ``(k+1)``-th largest magnitude.
    """
    taus = np.append(np.sort(np.abs(c))[::-1], 0.0)
    return np.array([np.linalg.norm(truth - U @ soft_threshold(c, tau)) for tau in taus])


@dataclass(frozen=True)
class CurveRow:
    sparsity: int
    nmse_mono: float | None
    nmse_cross: float | None
    n_trials_mono: int
    n_trials_cross: int


def sparsity_curve(
    X: CellMultiComplex,
    l: int,
    m: int,
    signals,
    epsilons=None,
    perspective: str = "m",
) -> list[CurveRow]:
    """NMSE on the cross-edges of ``(l, m)`` versus number of atoms used.

    ``signals`` is an ``E x M`` matrix on the flattened edge index.  The
    monocomplex code is fitted to the whole edge signal and then restricted
    to the cross-edges; the cross code is fitted to the cross-edge signal
    over the cross-Laplacian eigenbasis with the scaled fitting bound.

    With ``epsilons=None`` every trial contributes once at every support
    size, evaluated at the tightest fit with that support.  Otherwise each
    ``epsilon`` in the grid is solved and trials are binned by the support
    size they achieve.
    """
    Y = np.asarray(signals, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    edges = X.flatten().edges
    cross = X.family(l, m, 0, 0)
    if Y.shape[0] != len(edges):
        raise InputError(f"signals have {Y.shape[0]} rows, expected {len(edges)} edges")
    pos = {e: i for i, e in enumerate(edges)}
    mask = np.array([pos[e] for e in cross], dtype=int)
    U1 = edge_basis(X)
    U00 = cross_basis(X, l, m, perspective)
    D_U1 = U1[mask]
    E, N = len(edges), len(cross)

    sums_m: dict[int, list[float]] = {}
    sums_c: dict[int, list[float]] = {}
    for j in range(Y.shape[1]):
        y = Y[:, j]
        yc = y[mask]
        ref = np.linalg.norm(yc)
        if ref == 0:
            continue
        if epsilons is None:
            for k, err in enumerate(_path_errors(U1.T @ y, D_U1, yc)):
                sums_m.setdefault(k, []).append(err / ref)
            for k, err in enumerate(_path_errors(U00.T @ yc, U00, yc)):
                sums_c.setdefault(k, []).append(err / ref)
            continue
        for eps in epsilons:
            mono = basis_pursuit(U1, y, eps)
            sums_m.setdefault(mono.sparsity, []).append(np.linalg.norm(yc - D_U1 @ mono.coefficients) / ref)
            crs = basis_pursuit(U00, yc, scaled_epsilon(eps, N, E))
            sums_c.setdefault(crs.sparsity, []).append(np.linalg.norm(yc - U00 @ crs.coefficients) / ref)

    rows = []
    for k in sorted(set(sums_m) | set(sums_c)):
        vm, vc = sums_m.get(k, []), sums_c.get(k, [])
        rows.append(CurveRow(
            k,
            float(np.mean(vm)) if vm else None,
            float(np.mean(vc)) if vc else None,
            len(vm),
            len(vc),
        ))
    return rows
