"""Signals on cells: Hodge splits, divergence/curl, Fourier transforms, NMSE."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .boundary import cross_boundary_from_ell, cross_boundary_from_m, mono_b1, mono_b2
from .complex import CellMultiComplex
from .errors import IndexMismatch, ZeroReference
from .laplacians import check_perspective, cross_laplacian, hodge_laplacians
from .spectral import ZERO_TOL, eig_sym, pinv


@dataclass(frozen=True, eq=False)
class CochainSignal:
    values: np.ndarray
    index: tuple[str, ...]
    order: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "index", tuple(self.index))
        if values.shape[0] != len(self.index):
            raise IndexMismatch(f"{values.shape[0]} values for an index of {len(self.index)} cells")

    def __len__(self) -> int:
        return len(self.index)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.index, self.values.tolist()))


@dataclass(frozen=True, eq=False)
class HodgeSplit:
    irrotational: CochainSignal
    solenoidal: CochainSignal
    harmonic: CochainSignal
    node_potential: CochainSignal
    cell_potential: CochainSignal

    @property
    def components(self) -> tuple[CochainSignal, CochainSignal, CochainSignal]:
        return (self.irrotational, self.solenoidal, self.harmonic)


def _values(s, index: Sequence[str]) -> np.ndarray:
    """Values of ``s`` on ``index``; arrays are taken as already aligned."""
    if isinstance(s, CochainSignal):
        if s.index != tuple(index):
            if sorted(s.index) != sorted(index):
                raise IndexMismatch("signal index does not match the expected cell list")
            pos = {c: i for i, c in enumerate(s.index)}
            return s.values[[pos[c] for c in index]]
        return s.values
    arr = np.asarray(s, dtype=float)
    if arr.shape[0] != len(index):
        raise IndexMismatch(f"signal has {arr.shape[0]} rows, expected {len(index)}")
    return arr


def split(y: np.ndarray, D: np.ndarray, C: np.ndarray, zero_tol: float = ZERO_TOL):
    """Orthogonal split of ``y`` into ``img(D^T)``, ``img(C)`` and the rest.

    Returns the components and the minimum-norm potentials
    ``s0 = (D D^T)^+ D y`` and ``s2 = (C^T C)^+ C^T y``.  Works column-wise
    when ``y`` is a matrix.
    """
    s0 = pinv(D @ D.T, zero_tol) @ (D @ y)
    s2 = pinv(C.T @ C, zero_tol) @ (C.T @ y)
    irr = D.T @ s0
    sol = C @ s2
    return irr, sol, y - irr - sol, s0, s2


def _pack(parts, index, node_index, cell_index) -> HodgeSplit:
    irr, sol, harm, s0, s2 = parts
    return HodgeSplit(
        CochainSignal(irr, index, 1),
        CochainSignal(sol, index, 1),
        CochainSignal(harm, index, 1),
        CochainSignal(s0, node_index, 0),
        CochainSignal(s2, cell_index, 2),
    )


def hodge_split_mono(X: CellMultiComplex, s1) -> HodgeSplit:
    b1, b2 = mono_b1(X), mono_b2(X)
    y = _values(s1, b1.cols)
    return _pack(split(y, b1.astype_float(), b2.astype_float()), b1.cols, b1.rows, b2.cols)


def cross_operators(X: CellMultiComplex, l: int, m: int, perspective: str = "ell"):
    """``(D, C)``: divergence boundary onto the opposite layer's nodes and the
    filled-cell boundary, as incidence matrices over the cross-edges."""
    if check_perspective(perspective) == "ell":
        return cross_boundary_from_ell(X, l, m, 0, 0), cross_boundary_from_ell(X, l, m, 1, 0)
    return cross_boundary_from_m(X, l, m, 0, 0), cross_boundary_from_m(X, l, m, 0, 1)


def hodge_split_cross(X: CellMultiComplex, l: int, m: int, s1, perspective: str = "ell") -> HodgeSplit:
    D, C = cross_operators(X, l, m, perspective)
    y = _values(s1, D.cols)
    return _pack(split(y, D.astype_float(), C.astype_float()), D.cols, D.rows, C.cols)


def estimate_components(X: CellMultiComplex, l: int, m: int, y1, perspective: str = "ell") -> HodgeSplit:
    """Closed-form least-squares estimate of the three cross-edge components.

    The potentials minimise ``||y - D^T s0||`` and ``||y - C s2||`` with
    minimum norm; the harmonic estimate is what remains, so it satisfies
    ``D h = 0`` and ``C^T h = 0``.
    """
    return hodge_split_cross(X, l, m, y1, perspective)


def cross_divergence(X: CellMultiComplex, l: int, m: int, s1, perspective: str = "ell") -> CochainSignal:
    D, _ = cross_operators(X, l, m, perspective)
    return CochainSignal(D.astype_float() @ _values(s1, D.cols), D.rows, 0)


def cross_curl(X: CellMultiComplex, l: int, m: int, s1, perspective: str = "ell") -> CochainSignal:
    _, C = cross_operators(X, l, m, perspective)
    return CochainSignal(C.astype_float().T @ _values(s1, C.rows), C.cols, 2)


# --- Fourier transforms ----------------------------------------------------

def edge_basis(X: CellMultiComplex) -> np.ndarray:
    _, L1 = hodge_laplacians(X)
    return eig_sym(L1, psd=True).eigenvectors


def cross_basis(X: CellMultiComplex, l: int, m: int, perspective: str = "ell") -> np.ndarray:
    return cross_laplacian(X, l, m, 0, 0, perspective).eig.eigenvectors


def cft(X: CellMultiComplex, s1) -> np.ndarray:
    index = X.flatten().edges
    return edge_basis(X).T @ _values(s1, index)


def icft(X: CellMultiComplex, coeffs) -> CochainSignal:
    return CochainSignal(edge_basis(X) @ np.asarray(coeffs, dtype=float), X.flatten().edges, 1)


def cmc_ft(X: CellMultiComplex, l: int, m: int, s1, perspective: str = "ell") -> np.ndarray:
    return cross_basis(X, l, m, perspective).T @ _values(s1, X.family(l, m, 0, 0))


def icmc_ft(X: CellMultiComplex, l: int, m: int, coeffs, perspective: str = "ell") -> CochainSignal:
    U = cross_basis(X, l, m, perspective)
    return CochainSignal(U @ np.asarray(coeffs, dtype=float), X.family(l, m, 0, 0), 1)


# --- error metrics -----------------------------------------------------------

def _arr(s) -> np.ndarray:
    return s.values if isinstance(s, CochainSignal) else np.asarray(s, dtype=float)


def nmse(estimate, truth) -> float:
    """``||truth - estimate|| / ||truth||`` for one signal."""
    t, e = _arr(truth), _arr(estimate)
    if t.shape != e.shape:
        raise IndexMismatch(f"shapes differ: {e.shape} vs {t.shape}")
    ref = np.linalg.norm(t)
    if ref == 0:
        raise ZeroReference("reference signal has zero norm")
    return float(np.linalg.norm(t - e) / ref)


def average_nmse(estimates: np.ndarray, truths: np.ndarray) -> float:
    """Mean of per-column NMSE ratios for matrices of stacked trials."""
    E, T = np.asarray(estimates, float), np.asarray(truths, float)
    if E.shape != T.shape:
        raise IndexMismatch(f"shapes differ: {E.shape} vs {T.shape}")
    refs = np.linalg.norm(T, axis=0)
    if np.any(refs == 0):
        raise ZeroReference("a reference signal has zero norm")
    return float(np.mean(np.linalg.norm(T - E, axis=0) / refs))
