import copy

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmctsp.complex import build_complex, cell_count, flatten, layer_graph_components, to_spec, transitive_faces
from cmctsp.errors import (
    DanglingReference,
    DuplicateId,
    InvalidOrderPair,
    MultiLayerCell,
    OrderViolation,
    OrientationError,
    ParseError,
    ScopeError,
    UnknownLayer,
    ValidationError,
)
from cmctsp.synth import RandomCmcConfig, random_cmc

from conftest import load_spec, tetra_spec
from oracles import poset_ok, recount


def test_tri_counts(tri):
    assert cell_count(tri, 1, 2, 0, 0) == 2
    assert cell_count(tri, 1, 2, 1, 0) == 1
    assert cell_count(tri, 1, 2, 1, -1) == 1
    assert cell_count(tri, 1, 2, 0, -1) == 2
    assert cell_count(tri, 1, 2, -1, 0) == 1
    assert cell_count(tri, 1, 2, 0, 1) == 0


def test_fig2_counts(fig2):
    assert fig2.cell_count(1, 2, 0, 0) == 6
    assert fig2.cell_count(1, 2, 1, 0) == 1
    assert fig2.cell_count(1, 2, 1, -1) == 10


def test_unknown_layer(tri):
    with pytest.raises(UnknownLayer):
        tri.cell_count(1, 5, 0, 0)
    with pytest.raises(InvalidOrderPair):
        tri.family(2, 1, 0, 0)


def test_sentinel_pairs(tri):
    assert tri.family(1, 2, -1, -1) == ()
    assert tri.family(1, 2, -2, 0) == ()


def test_flatten_tri(tri):
    flat = flatten(tri)
    assert flat.nodes == ("u1", "u2", "v1")
    assert flat.edges == ("e1", "x1", "x2")
    assert flat.cells == ("T",)
    assert (flat.N, flat.E, flat.C) == (3, 3, 1)


def test_flatten_two_single_nodes():
    X = build_complex({"layers": [{"id": 1, "nodes": ["a"]}, {"id": 2, "nodes": ["b"]}]})
    flat = X.flatten()
    assert (flat.N, flat.E, flat.C) == (2, 0, 0)


def test_flatten_stable(f3):
    assert f3.flatten() == f3.flatten()
    again = build_complex(load_spec("f3"))
    assert again.flatten() == f3.flatten()


def test_f3_manifest(f3, f3_manifest):
    flat = f3.flatten()
    assert (flat.N, flat.E, flat.C) == (f3_manifest["N"], f3_manifest["E"], f3_manifest["C"])
    assert (flat.N, flat.E, flat.C) == (27, 61, 49)
    intra = sum(len(f3.intra(l, 1)) for l in f3.layers)
    cross = sum(len(f3.cross(l, m, 1)) for l, m in f3.cross_pairs())
    assert flat.E == intra + cross


@pytest.mark.parametrize("seed", range(15))
def test_random_recount_and_poset(seed):
    X = random_cmc(RandomCmcConfig(layer_nodes=(5, 4, 4), p_fill=0.6, p_fill_intra=0.6, pmax=2, seed=seed,
                                   all_pairs=True))
    spec = to_spec(X)
    flat = X.flatten()
    assert (flat.N, flat.E, flat.C) == recount(spec)
    assert poset_ok(spec)


def test_transitive_faces(tri):
    assert transitive_faces(tri, "T") == {"e1", "x1", "x2", "u1", "u2", "v1"}
    assert transitive_faces(tri, "u1") == set()


def test_cross_types(tri, f3):
    assert tri.cross_type("x1") == (0, 0)
    assert tri.cross_type("T") == (1, 0)
    assert f3.cross_type("c14_22_23") == (0, 1)


def test_endpoints_and_layer(tri):
    assert tri.endpoints("x1") == ("u1", "v1")
    assert tri.layer_of("v1") == 2
    with pytest.raises(OrderViolation):
        tri.endpoints("u1")


def test_layer_components(f3):
    comp = layer_graph_components(f3, 2)
    assert comp["10"] == comp["17"] and comp["11"] == comp["15"]
    assert comp["10"] != comp["11"]
    assert len(set(layer_graph_components(f3, 3).values())) == 5


def test_roundtrip_spec(f3):
    assert to_spec(build_complex(to_spec(f3))) == to_spec(f3)


# --- validation errors ---------------------------------------------------------

def _tri():
    return load_spec("tri")


def test_cell_bounded_by_node():
    spec = _tri()
    spec["two_cells"][0]["boundary"].append({"edge_id": "u1", "sign": 1})
    with pytest.raises(OrderViolation):
        build_complex(spec)


def test_dangling_reference():
    spec = _tri()
    spec["two_cells"][0]["boundary"][0]["edge_id"] = "nope"
    with pytest.raises(DanglingReference):
        build_complex(spec)
    spec = _tri()
    spec["cross_edges"][0]["head"] = "ghost"
    with pytest.raises(DanglingReference):
        build_complex(spec)


def test_duplicate_id():
    spec = _tri()
    spec["cross_edges"][1]["id"] = "x1"
    with pytest.raises(DuplicateId):
        build_complex(spec)


def test_bad_sign():
    spec = _tri()
    spec["two_cells"][0]["boundary"][0]["sign"] = 2
    with pytest.raises(ParseError, match="two_cells"):
        build_complex(spec)


def test_not_a_cycle():
    spec = _tri()
    spec["two_cells"][0]["boundary"][0]["sign"] = 1
    with pytest.raises(OrientationError):
        build_complex(spec)


def test_three_layer_cell():
    spec = {
        "layers": [{"id": 1, "nodes": ["a"]}, {"id": 2, "nodes": ["b"]}, {"id": 3, "nodes": ["c"]}],
        "cross_edges": [
            {"layers": [1, 2], "id": "ab", "tail": "a", "head": "b"},
            {"layers": [2, 3], "id": "bc", "tail": "b", "head": "c"},
            {"layers": [1, 3], "id": "ac", "tail": "a", "head": "c"},
        ],
        "two_cells": [{"scope": [1, 3], "id": "t", "boundary": [
            {"edge_id": "ab", "sign": 1}, {"edge_id": "bc", "sign": 1}, {"edge_id": "ac", "sign": -1}]}],
    }
    with pytest.raises((MultiLayerCell, ScopeError)):
        build_complex(spec)
    spec["two_cells"][0]["scope"] = [1, 2, 3]
    with pytest.raises(MultiLayerCell):
        build_complex(spec)


def test_cross_edge_within_one_layer():
    spec = _tri()
    spec["cross_edges"][0]["head"] = "u2"
    with pytest.raises(ScopeError):
        build_complex(spec)


def test_missing_key_names_record():
    spec = _tri()
    del spec["intra_edges"][0]["tail"]
    with pytest.raises(ParseError, match=r"intra_edges\[0\]"):
        build_complex(spec)


def test_all_validation_errors_share_base():
    for exc in (DuplicateId, DanglingReference, OrderViolation, ScopeError, OrientationError):
        assert issubclass(exc, ValidationError)


def test_default_cross_orientation():
    spec = _tri()
    for e in spec["cross_edges"]:
        e["endpoints"] = [e.pop("head"), e.pop("tail")]
    X = build_complex(spec)
    # tail defaults to the lower layer
    assert X.endpoints("x1") == ("u1", "v1")


def test_higher_cell():
    spec = tetra_spec()
    X = build_complex(spec)
    assert X.cross_type("vol") == (1, 1)
    assert X.family(1, 2, 1, 1) == ("vol",)
    bad = copy.deepcopy(spec)
    bad["higher_cells"][0]["boundary"][0]["sign"] = -1
    with pytest.raises(OrientationError):
        build_complex(bad)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(2, 3))
def test_random_complex_always_valid(seed, n_layers):
    X = random_cmc(RandomCmcConfig(layer_nodes=(4,) * n_layers, p_fill=0.5, p_fill_intra=0.5, seed=seed))
    assert poset_ok(to_spec(X))
