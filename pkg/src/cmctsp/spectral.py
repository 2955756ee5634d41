"""Dense symmetric eigen-solver, rank, kernel and pseudo-inverse.

Everything here works on small dense arrays; the Laplacians of desk-scale
complexes have at most a few hundred rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NotSymmetric

ZERO_TOL = 1e-8
SYM_TOL = 1e-12


def _as_dense(A) -> np.ndarray:
    if hasattr(A, "toarray"):
        A = A.toarray()
    return np.asarray(A, dtype=float)


def fix_signs(vectors: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Flip columns so the first entry above ``tol`` in magnitude is positive."""
    V = np.array(vectors, dtype=float, copy=True)
    for j in range(V.shape[1]):
        col = V[:, j]
        big = np.flatnonzero(np.abs(col) > tol * max(1.0, np.abs(col).max()))
        if big.size and col[big[0]] < 0:
            V[:, j] = -col
    return V


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    zero_tol: float = ZERO_TOL

    @property
    def scale(self) -> float:
        top = float(np.abs(self.eigenvalues).max()) if self.eigenvalues.size else 0.0
        return top if top > 0 else 1.0

    def zero_mask(self) -> np.ndarray:
        return self.eigenvalues <= self.zero_tol * self.scale

    def kernel_dim(self) -> int:
        return int(self.zero_mask().sum())

    def reconstruct(self) -> np.ndarray:
        U = self.eigenvectors
        return (U * self.eigenvalues) @ U.T


def eig_sym(A, zero_tol: float = ZERO_TOL, psd: bool = False) -> EigenDecomposition:
    """Eigendecomposition of a real symmetric matrix.

    Eigenvalues come out non-decreasing and every eigenvector is signed so its
    first clearly nonzero entry is positive.  With ``psd=True`` eigenvalues in
    ``[-zero_tol*scale, 0)`` are clamped to zero.
    """
    A = _as_dense(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {A.shape}")
    if A.size == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0)), zero_tol)
    norm = np.abs(A).max()
    if np.abs(A - A.T).max() > SYM_TOL * max(norm, 1.0):
        raise NotSymmetric("matrix is not symmetric within tolerance")
    if not np.all(np.isfinite(A)):
        raise NoConvergence("matrix has non-finite entries")
    try:
        w, V = np.linalg.eigh((A + A.T) / 2)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    if psd:
        floor = zero_tol * max(np.abs(w).max(), 1e-300)
        w = np.where((w < 0) & (w >= -floor), 0.0, w)
    return EigenDecomposition(w, fix_signs(V), zero_tol)


def kernel_basis(d: EigenDecomposition) -> np.ndarray:
    """Orthonormal columns spanning the numerical kernel."""
    return d.eigenvectors[:, d.zero_mask()]


def range_basis(d: EigenDecomposition) -> np.ndarray:
    """Eigenvectors of the nonzero eigenvalues."""
    return d.eigenvectors[:, ~d.zero_mask()]


def numerical_rank(M, zero_tol: float = ZERO_TOL) -> int:
    M = _as_dense(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    return int((s > zero_tol * s[0]).sum())


def pinv(M, zero_tol: float = ZERO_TOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse via a symmetric eigendecomposition.

    Symmetric inputs are inverted on their own spectrum; otherwise the Gram
    matrix on the smaller side is used.
    """
    M = _as_dense(M)
    r, c = M.shape
    if r == 0 or c == 0:
        return np.zeros((c, r))
    if r == c and np.abs(M - M.T).max() <= SYM_TOL * max(np.abs(M).max(), 1.0):
        d = eig_sym(M, zero_tol)
        keep = np.abs(d.eigenvalues) > zero_tol * d.scale
        U = d.eigenvectors[:, keep]
        return (U / d.eigenvalues[keep]) @ U.T
    if c <= r:
        G = M.T @ M
        # the Gram matrix squares singular values; its rounding noise sits
        # near n * eps relative, so zero_tol**2 alone can keep noise directions
        cut = max(zero_tol ** 2, 64 * r * np.finfo(float).eps)
        d = eig_sym(G, cut)
        keep = d.eigenvalues > cut * d.scale
        V = d.eigenvectors[:, keep]
        return (V / d.eigenvalues[keep]) @ V.T @ M.T
    return pinv(M.T, zero_tol).T
