import networkx as nx
import numpy as np
import pytest

from cmctsp.boundary import cross_boundary_from_ell
from cmctsp.complex import build_complex, to_spec
from cmctsp.errors import DependentCells, InputError, UnsupportedOrderPair
from cmctsp.laplacians import (
    cone_count_oracle,
    cross_betti,
    cross_laplacian,
    harmonic_cross_hubs,
    hodge_laplacians,
    lower_upper_mono,
)
from cmctsp.spectral import eig_sym
from cmctsp.synth import RandomCmcConfig, random_cmc

from oracles import components, kernel_count_identity


def test_single_edge_l1():
    X = build_complex({"layers": [{"id": 1, "nodes": ["a", "b"]}],
                       "intra_edges": [{"layer": 1, "id": "e", "tail": "a", "head": "b"}]})
    _, L1 = hodge_laplacians(X)
    assert L1.tolist() == [[2.0]]


def test_tri_connected(tri):
    L0, L1 = hodge_laplacians(tri)
    assert eig_sym(L0, psd=True).kernel_dim() == 1
    assert eig_sym(L1, psd=True).kernel_dim() == 0


def test_f3_two_holes(f3, f3_manifest):
    _, L1 = hodge_laplacians(f3)
    assert eig_sym(L1, psd=True).kernel_dim() == f3_manifest["harmonic_dim_L1"] == 2
    lo, up = lower_upper_mono(f3)
    assert np.allclose(lo @ up, 0, atol=1e-10)


def test_tri_cross_laplacian(tri):
    L = cross_laplacian(tri, 1, 2, 0, 0, "ell")
    assert L.lower.tolist() == [[1, 1], [1, 1]]
    assert L.upper.tolist() == [[1, -1], [-1, 1]]
    assert L.total.tolist() == [[2, 0], [0, 2]]
    assert L.index == ("x1", "x2")


def test_graph_laplacian_recovered(fig2):
    L = cross_laplacian(fig2, 1, 2, 0, -1, "ell")
    G = nx.DiGraph()
    G.add_nodes_from(fig2.nodes(1))
    G.add_edges_from(fig2.endpoints(e) for e in fig2.intra(1, 1))
    ref = nx.laplacian_matrix(G.to_undirected(), nodelist=list(fig2.nodes(1))).toarray()
    assert np.array_equal(L.total, ref)


def test_upper_cross_degrees(fig2):
    L = cross_laplacian(fig2, 1, 2, 0, -1, "m")
    degree = {v: 0 for v in fig2.nodes(1)}
    for e in fig2.family(1, 2, 0, 0):
        for v in fig2.endpoints(e):
            if v in degree:
                degree[v] += 1
    assert np.array_equal(L.total, np.diag([degree[v] for v in fig2.nodes(1)]))


@pytest.mark.parametrize("seed", range(10))
def test_lower_upper_commute(seed):
    X = random_cmc(RandomCmcConfig(layer_nodes=(6, 6), p_fill=0.6, p_fill_intra=0.5, pmax=2, seed=seed))
    for k, n in ((0, 0), (0, -1), (-1, 0), (1, -1), (1, 0), (0, 1)):
        for perspective in ("ell", "m"):
            L = cross_laplacian(X, 1, 2, k, n, perspective)
            assert np.allclose(L.lower @ L.upper, 0, atol=1e-10)
            assert np.allclose(L.upper @ L.lower, 0, atol=1e-10)
            assert len(L.index) == X.cell_count(1, 2, k, n)
            assert np.all(eig_sym(L.total).eigenvalues > -1e-9)


def test_betti_fig3(fig3):
    assert cross_betti(fig3, 1, 2, 0, 0).as_dict() == {"beta_ell": 2, "beta_m": 0}


def test_betti_tri(tri):
    assert cross_betti(tri, 1, 2, 0, 0).beta_ell == 0


def test_betti_f3(f3, f3_manifest):
    for pair, want in f3_manifest["cross_betti_00"].items():
        l, m = map(int, pair.split(","))
        assert cross_betti(f3, l, m, 0, 0).as_dict() == want
    assert cross_betti(f3, 2, 3, 0, 0).as_dict() == {"beta_ell": 0, "beta_m": 3}


def test_betti_isolated_layers():
    X = build_complex({"layers": [{"id": 1, "nodes": ["a", "b", "c"]}, {"id": 2, "nodes": ["d"]}]})
    b = cross_betti(X, 1, 2, 0, -1)
    assert b.beta_m == 3
    assert b.beta_ell == 3


@pytest.mark.parametrize("seed", range(10))
def test_betti_0_minus1(seed):
    X = random_cmc(RandomCmcConfig(layer_nodes=(7, 5), p_intra=0.3, p_cross=0.15, seed=seed))
    b = cross_betti(X, 1, 2, 0, -1)
    edges = [X.endpoints(e) for e in X.intra(1, 1)]
    assert b.beta_ell == components(X.nodes(1), edges)
    touched = {v for e in X.family(1, 2, 0, 0) for v in X.endpoints(e)}
    assert b.beta_m == sum(v not in touched for v in X.nodes(1))
    b2 = cross_betti(X, 1, 2, -1, 0)
    assert b2.beta_m == components(X.nodes(2), [X.endpoints(e) for e in X.intra(2, 1)])


def test_unsupported_orders(tri):
    with pytest.raises(UnsupportedOrderPair):
        cross_betti(tri, 1, 2, 1, 0)


def test_cones_fig3(fig3):
    r = cone_count_oracle(fig3, 1, 2)
    assert r.count == 2 and r.n_open == 1 and r.n_closed == 1
    assert [w.closed for w in r.cones["10"]] == [False]
    assert [w.closed for w in r.cones["13"]] == [True]
    hubs = harmonic_cross_hubs(fig3, 1, 2)
    assert [(h.node, h.critical) for h in hubs] == [("10", True), ("13", False)]


def test_cones_tri(tri):
    assert cone_count_oracle(tri, 1, 2).count == 0
    assert harmonic_cross_hubs(tri, 1, 2) == []


def test_star_hub():
    X = build_complex({
        "layers": [{"id": 1, "nodes": ["a", "b", "c"]}, {"id": 2, "nodes": ["h"]}],
        "cross_edges": [{"layers": [1, 2], "id": f"x{v}", "tail": v, "head": "h"} for v in "abc"],
    })
    r = cone_count_oracle(X, 1, 2)
    assert r.count == 2 and r.n_open == 2
    hubs = harmonic_cross_hubs(X, 1, 2)
    assert len(hubs) == 1 and hubs[0].node == "h" and hubs[0].open_cones == 2 and hubs[0].critical


def test_f3_hubs(f3):
    hubs = {h.node: (h.open_cones, h.closed_cones) for h in harmonic_cross_hubs(f3, 2, 3, hub_layer=2)}
    assert hubs == {"12": (0, 1), "13": (0, 1), "15": (1, 0)}


def test_dependent_cells(f3):
    with pytest.raises(DependentCells):
        cone_count_oracle(f3, 1, 2)
    assert cone_count_oracle(f3, 1, 2, hub_layer=1).count == 9


def test_bad_hub_layer(f3):
    with pytest.raises(InputError):
        cone_count_oracle(f3, 1, 2, hub_layer=3)


@pytest.mark.parametrize("seed", range(15))
def test_cone_count_without_cells(seed):
    X = random_cmc(RandomCmcConfig(layer_nodes=(6, 6), p_cross=0.35, seed=seed))
    r = cone_count_oracle(X, 1, 2)
    touched = {v for e in X.family(1, 2, 0, 0) for v in X.endpoints(e)}
    n0 = sum(v in touched for v in X.nodes(2))
    assert r.count == X.cell_count(1, 2, 0, 0) - n0
    assert sum(len(ws) for ws in r.cones.values()) == r.count
    assert r.count == kernel_count_identity(to_spec(X), 1, 2, 2)


@pytest.mark.parametrize("seed", range(15))
def test_cones_span_kernel(seed):
    """Oriented cone wedges plus filled-cell columns form a basis of ker(D)."""
    X = random_cmc(RandomCmcConfig(layer_nodes=(6, 6), p_cross=0.4, p_fill=0.5, pmax=2, seed=seed))
    r = cone_count_oracle(X, 1, 2)
    cross = X.family(1, 2, 0, 0)
    pos = {e: i for i, e in enumerate(cross)}
    D = cross_boundary_from_ell(X, 1, 2, 0, 0).astype_float()
    hub_row = {h: i for i, h in enumerate(X.nodes(2))}
    cols = []
    for hub, ws in r.cones.items():
        assert len(ws) <= len(r.wedges[hub])
        for w in ws:
            a, b = pos[w.edges[0]], pos[w.edges[1]]
            v = np.zeros(len(cross))
            v[a], v[b] = D[hub_row[hub], a], -D[hub_row[hub], b]
            cols.append(v)
    B10 = cross_boundary_from_ell(X, 1, 2, 1, 0).astype_float()
    W = np.column_stack(cols + list(B10.T)) if cols or B10.size else np.zeros((len(cross), 0))
    assert np.allclose(D @ W, 0)
    assert np.linalg.matrix_rank(W) == W.shape[1] == len(cross) - np.linalg.matrix_rank(D)
    assert len(cols) == r.count
