import numpy as np
import pytest

from cmctsp.boundary import (
    IncidenceMatrix,
    cross_boundary_from_ell,
    cross_boundary_from_m,
    extract_blocks,
    incidence,
    int_product,
    mono_b1,
    mono_b2,
)
from cmctsp.complex import build_complex
from cmctsp.errors import BlockMismatch, InvalidOrderPair, UnknownLayer
from cmctsp.synth import RandomCmcConfig, random_cmc

from conftest import tetra_spec


def test_tri_b1(tri):
    B = mono_b1(tri)
    assert B.rows == ("u1", "u2", "v1")
    assert B.cols == ("e1", "x1", "x2")
    assert B.dense().tolist() == [[-1, -1, 0], [1, 0, -1], [0, 1, 1]]
    assert not B.dense().sum(axis=0).any()
    assert B.dense().dtype.kind == "i"


def test_tri_b2(tri):
    B = mono_b2(tri)
    assert B.cols == ("T",)
    assert B.dense()[:, 0].tolist() == [1, -1, 1]
    assert not int_product(mono_b1(tri), B).any()


def test_empty_shapes():
    X = build_complex({"layers": [{"id": 1, "nodes": ["a", "b"]}, {"id": 2, "nodes": ["c"]}]})
    assert mono_b1(X).shape == (3, 0)
    assert mono_b2(X).shape == (0, 0)


def test_tri_cross_boundaries(tri):
    assert cross_boundary_from_ell(tri, 1, 2, 1, 0).dense()[:, 0].tolist() == [-1, 1]
    assert cross_boundary_from_ell(tri, 1, 2, 1, 0).rows == ("x1", "x2")
    assert cross_boundary_from_m(tri, 1, 2, 1, 0).dense()[:, 0].tolist() == [1]
    assert cross_boundary_from_m(tri, 1, 2, 1, 0).rows == ("e1",)
    # cross-edges toward the layer-2 node and the layer-1 nodes
    assert cross_boundary_from_ell(tri, 1, 2, 0, 0).dense().tolist() == [[1, 1]]
    assert cross_boundary_from_m(tri, 1, 2, 0, 0).dense().tolist() == [[-1, 0], [0, -1]]


@pytest.mark.parametrize("n", [-1, 0, 1])
def test_zero_conventions(fig2, n):
    B = cross_boundary_from_ell(fig2, 1, 2, -1, n)
    assert B.shape[0] == 0 and not B.dense().any()
    B = cross_boundary_from_m(fig2, 1, 2, n, -1)
    assert B.shape[0] == 0 and not B.dense().any()


def test_intra_blocks_recovered(fig2):
    # (k, -1) from layer l is the intra boundary of layer 1
    B = cross_boundary_from_ell(fig2, 1, 2, 1, -1)
    assert B.rows == fig2.nodes(1) and B.cols == fig2.intra(1, 1)
    assert np.array_equal(B.dense(), mono_b1(fig2).submatrix(fig2.nodes(1), fig2.intra(1, 1)).dense())


def test_errors(tri):
    with pytest.raises(UnknownLayer):
        cross_boundary_from_ell(tri, 1, 7, 0, 0)
    with pytest.raises(InvalidOrderPair):
        cross_boundary_from_m(tri, 2, 1, 0, 0)
    with pytest.raises(InvalidOrderPair):
        cross_boundary_from_ell(tri, 1, 2, -2, 0)


def test_higher_order_products():
    X = build_complex(tetra_spec())
    up = cross_boundary_from_ell(X, 1, 2, 1, 1)
    assert up.rows == X.family(1, 2, 0, 1) and up.shape == (2, 1)
    assert not int_product(cross_boundary_from_ell(X, 1, 2, 0, 1), up).any()
    assert not int_product(cross_boundary_from_m(X, 1, 2, 1, 0), cross_boundary_from_m(X, 1, 2, 1, 1)).any()
    assert not int_product(mono_b1(X), mono_b2(X)).any()


def test_blocks_tri(tri):
    blocks = extract_blocks(tri, mono_b1(tri), mono_b2(tri), 1, 2)
    assert blocks.b1_m_cross.rows == ("v1",)
    assert blocks.b1_m_cross.dense().tolist() == cross_boundary_from_ell(tri, 1, 2, 0, 0).dense().tolist()
    assert blocks.b2_cross_10.dense()[:, 0].tolist() == [-1, 1]


def test_blocks_no_cross():
    X = build_complex({
        "layers": [{"id": 1, "nodes": ["a", "b"]}, {"id": 2, "nodes": ["c"]}],
        "intra_edges": [{"layer": 1, "id": "ab", "tail": "a", "head": "b"}],
    })
    blocks = extract_blocks(X, mono_b1(X), mono_b2(X), 1, 2)
    assert blocks.b1_ell_cross.shape == (2, 0)
    assert blocks.b1_m_cross.shape == (1, 0)


@pytest.mark.parametrize("seed", range(10))
def test_blocks_random(seed):
    X = random_cmc(RandomCmcConfig(layer_nodes=(6, 5), p_fill=0.5, p_fill_intra=0.5, pmax=2, seed=seed))
    b1, b2 = mono_b1(X), mono_b2(X)
    blocks = extract_blocks(X, b1, b2, 1, 2)
    # reassembling the named blocks gives back the full matrices
    nodes = X.nodes(1) + X.nodes(2)
    assert np.array_equal(
        np.block([[blocks.b1_ell.dense(), blocks.b1_ell_cross.dense(), np.zeros((len(X.nodes(1)), len(X.intra(2, 1))), int)],
                  [np.zeros((len(X.nodes(2)), len(X.intra(1, 1))), int), blocks.b1_m_cross.dense(), blocks.b1_m.dense()]]),
        b1.submatrix(nodes, b1.cols).dense(),
    )


def test_block_mismatch(tri):
    b1 = mono_b1(tri)
    broken = IncidenceMatrix(b1.rows, b1.cols, b1.dense() * np.array([1, 1, -1]))
    with pytest.raises(BlockMismatch):
        extract_blocks(tri, broken, mono_b2(tri), 1, 2)


def test_sparse_storage_matches_dense(monkeypatch, f3):
    dense = mono_b1(f3).dense()
    import cmctsp.boundary as boundary

    monkeypatch.setattr(boundary, "SPARSE_THRESHOLD", 1)
    B = incidence(f3, *(f3.flatten()[:2]))
    assert B.is_sparse
    assert np.array_equal(B.dense(), dense)
    assert not int_product(B, boundary.mono_b2(f3)).any()
    assert B.triplets() == mono_b1(f3).triplets()


def test_triplets_order(tri):
    assert mono_b1(tri).triplets()[:2] == [("u1", "e1", -1), ("u1", "x1", -1)]
    assert mono_b1(tri).T.shape == (3, 3)
