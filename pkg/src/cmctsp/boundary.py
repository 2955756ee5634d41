"""Signed incidence matrices of a Cell MultiComplex.

Every matrix carries its row and column id lists.  Entries are exact
``int64`` values read from the stored boundary lists; nothing here touches
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .complex import CellMultiComplex
from .errors import BlockMismatch, InvalidOrderPair

SPARSE_THRESHOLD = 10_000


@dataclass(frozen=True, eq=False)
class IncidenceMatrix:
    rows: tuple[str, ...]
    cols: tuple[str, ...]
    data: np.ndarray | sp.csr_matrix

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.cols))

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.data)

    def dense(self) -> np.ndarray:
        """Exact integer array."""
        if self.is_sparse:
            return self.data.toarray()
        return self.data

    def astype_float(self) -> np.ndarray:
        return self.dense().astype(float)

    @property
    def T(self) -> "IncidenceMatrix":
        return IncidenceMatrix(self.cols, self.rows, self.data.T.tocsr() if self.is_sparse else self.data.T)

    def row_index(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.rows)}

    def col_index(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.cols)}

    def submatrix(self, rows: Sequence[str], cols: Sequence[str]) -> "IncidenceMatrix":
        ri, ci = self.row_index(), self.col_index()
        block = self.dense()[np.ix_([ri[r] for r in rows], [ci[c] for c in cols])]
        return IncidenceMatrix(tuple(rows), tuple(cols), block.astype(np.int64))

    def triplets(self) -> list[tuple[str, str, int]]:
        """Nonzero entries as ``(row_id, col_id, value)`` in row-major order."""
        coo = sp.coo_matrix(self.data)
        order = np.lexsort((coo.col, coo.row))
        return [
            (self.rows[coo.row[i]], self.cols[coo.col[i]], int(coo.data[i]))
            for i in order
            if coo.data[i] != 0
        ]


def int_product(a: IncidenceMatrix, b: IncidenceMatrix) -> np.ndarray:
    """Exact integer product ``a @ b`` as a dense array."""
    if a.cols != b.rows:
        raise InvalidOrderPair("inner index lists of the two matrices differ")
    if a.is_sparse or b.is_sparse:
        return (sp.csr_matrix(a.data) @ sp.csr_matrix(b.data)).toarray()
    return a.data @ b.data


def incidence(X: CellMultiComplex, rows: Sequence[str], cols: Sequence[str]) -> IncidenceMatrix:
    """Signed incidence of ``cols`` against ``rows`` read from stored boundaries."""
    rows, cols = tuple(rows), tuple(cols)
    ri = {c: i for i, c in enumerate(rows)}
    r_idx, c_idx, vals = [], [], []
    for j, cid in enumerate(cols):
        for face, sign in X.cell(cid).boundary:
            i = ri.get(face)
            if i is not None:
                r_idx.append(i)
                c_idx.append(j)
                vals.append(sign)
    shape = (len(rows), len(cols))
    if len(rows) + len(cols) >= SPARSE_THRESHOLD:
        data = sp.csr_matrix((np.array(vals, dtype=np.int64), (r_idx, c_idx)), shape=shape)
    else:
        data = np.zeros(shape, dtype=np.int64)
        data[r_idx, c_idx] = vals
    return IncidenceMatrix(rows, cols, data)


def mono_b1(X: CellMultiComplex) -> IncidenceMatrix:
    """Node-edge incidence of the flattened complex (N x E)."""
    flat = X.flatten()
    return incidence(X, flat.nodes, flat.edges)


def mono_b2(X: CellMultiComplex) -> IncidenceMatrix:
    """Edge-polygon incidence of the flattened complex (E x C)."""
    flat = X.flatten()
    return incidence(X, flat.edges, flat.cells)


def _check_orders(l: int, m: int, k: int, n: int) -> None:
    if not l < m:
        raise InvalidOrderPair(f"layer pair must satisfy l < m, got ({l}, {m})")
    if k < -1 or n < -1:
        raise InvalidOrderPair(f"orders must be >= -1, got ({k}, {n})")


def cross_boundary_from_ell(X: CellMultiComplex, l: int, m: int, k: int, n: int) -> IncidenceMatrix:
    """Boundary of the ``(k, n)`` family toward its faces on layer ``l``.

    Rows are the ``(k-1, n)`` family, columns the ``(k, n)`` family.  Empty
    families give correctly shaped empty matrices, which covers the zero
    conventions at ``k = -1`` and ``n = -1``.
    """
    X._check_layer(l)
    X._check_layer(m)
    _check_orders(l, m, k, n)
    return incidence(X, X.family(l, m, k - 1, n), X.family(l, m, k, n))


def cross_boundary_from_m(X: CellMultiComplex, l: int, m: int, k: int, n: int) -> IncidenceMatrix:
    """Boundary of the ``(k, n)`` family toward its faces on layer ``m``."""
    X._check_layer(l)
    X._check_layer(m)
    _check_orders(l, m, k, n)
    return incidence(X, X.family(l, m, k, n - 1), X.family(l, m, k, n))


@dataclass(frozen=True)
class Blocks:
    """Named sub-blocks of the flattened B1 and B2 for one layer pair."""

    b1_ell: IncidenceMatrix          # l nodes x l edges
    b1_ell_cross: IncidenceMatrix    # l nodes x cross-edges
    b1_m_cross: IncidenceMatrix      # m nodes x cross-edges
    b1_m: IncidenceMatrix            # m nodes x m edges
    b2_cross_10: IncidenceMatrix     # cross-edges x (1,0) cells
    b2_cross_01: IncidenceMatrix     # cross-edges x (0,1) cells
    b2_ell_10: IncidenceMatrix       # l edges x (1,0) cells
    b2_m_01: IncidenceMatrix         # m edges x (0,1) cells
    b2_ell: IncidenceMatrix          # l edges x l polygons
    b2_m: IncidenceMatrix            # m edges x m polygons

    def named(self) -> dict[str, IncidenceMatrix]:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def extract_blocks(
    X: CellMultiComplex, b1: IncidenceMatrix, b2: IncidenceMatrix, l: int, m: int
) -> Blocks:
    """Cut B1/B2 along the layer partition and cross-check each block.

    Each block is compared with the matching directly-built cross-boundary
    matrix; any disagreement raises :class:`BlockMismatch`.
    """
    fam = lambda k, n: X.family(l, m, k, n)  # noqa: E731
    nodes_l, nodes_m = fam(0, -1), fam(-1, 0)
    edges_l, edges_m, cross = fam(1, -1), fam(-1, 1), fam(0, 0)
    c10, c01 = fam(1, 0), fam(0, 1)
    blocks = Blocks(
        b1_ell=b1.submatrix(nodes_l, edges_l),
        b1_ell_cross=b1.submatrix(nodes_l, cross),
        b1_m_cross=b1.submatrix(nodes_m, cross),
        b1_m=b1.submatrix(nodes_m, edges_m),
        b2_cross_10=b2.submatrix(cross, c10),
        b2_cross_01=b2.submatrix(cross, c01),
        b2_ell_10=b2.submatrix(edges_l, c10),
        b2_m_01=b2.submatrix(edges_m, c01),
        b2_ell=b2.submatrix(edges_l, fam(2, -1)),
        b2_m=b2.submatrix(edges_m, fam(-1, 2)),
    )
    direct = {
        "b1_ell": cross_boundary_from_ell(X, l, m, 1, -1),
        "b1_ell_cross": cross_boundary_from_m(X, l, m, 0, 0),
        "b1_m_cross": cross_boundary_from_ell(X, l, m, 0, 0),
        "b1_m": cross_boundary_from_m(X, l, m, -1, 1),
        "b2_cross_10": cross_boundary_from_ell(X, l, m, 1, 0),
        "b2_cross_01": cross_boundary_from_m(X, l, m, 0, 1),
        "b2_ell_10": cross_boundary_from_m(X, l, m, 1, 0),
        "b2_m_01": cross_boundary_from_ell(X, l, m, 0, 1),
        "b2_ell": cross_boundary_from_ell(X, l, m, 2, -1),
        "b2_m": cross_boundary_from_m(X, l, m, -1, 2),
    }
    for name, block in blocks.named().items():
        ref = direct[name]
        if block.rows != ref.rows or block.cols != ref.cols or not np.array_equal(block.dense(), ref.dense()):
            raise BlockMismatch(f"block {name} of the flattened incidence disagrees with the cross-boundary map")
    return blocks
