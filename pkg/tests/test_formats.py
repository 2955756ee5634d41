import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cmctsp.errors import IndexMismatch, ParseError, UnknownCellId
from cmctsp.formats import (
    canonical_json,
    complex_json,
    fmt,
    parse_complex,
    parse_signal_table,
    read_complex,
    read_signals,
    signals_csv,
    table_csv,
    write_complex,
    write_matrix,
    write_signals,
)
from cmctsp.laplacians import cross_betti, hodge_laplacians
from cmctsp.spectral import eig_sym

from conftest import DATA, load_spec


@pytest.mark.parametrize("name", ["tri", "fig2", "fig3", "f3"])
def test_round_trip(tmp_path, name):
    X = read_complex(DATA / f"{name}.json")
    path = write_complex(X, tmp_path / "x.json")
    Y = read_complex(path)
    assert complex_json(Y) == complex_json(X)
    assert Y.flatten() == X.flatten()


def test_fixture_files_are_canonical():
    for name in ("tri", "fig2", "fig3", "f3"):
        text = (DATA / f"{name}.json").read_text()
        assert complex_json(parse_complex(text)) == text


def test_bad_sign_names_record():
    spec = load_spec("tri")
    spec["two_cells"][0]["boundary"][1]["sign"] = 2
    with pytest.raises(ParseError, match=r"two_cells\[0\]\.boundary\[1\]"):
        parse_complex(json.dumps(spec), "tri.json")


def test_json_error_position():
    with pytest.raises(ParseError, match=r"bad\.json:2:\d+"):
        parse_complex('{"layers": [\n  {"id": 1,, "nodes": []}]}', "bad.json")


def test_missing_file(tmp_path):
    with pytest.raises(ParseError, match="cannot read"):
        read_complex(tmp_path / "nope.json")


def test_f3_manifest(f3, f3_manifest):
    flat = f3.flatten()
    assert (flat.N, flat.E, flat.C) == (f3_manifest["N"], f3_manifest["E"], f3_manifest["C"])
    for pair, count in f3_manifest["cross_edges"].items():
        l, m = map(int, pair.split(","))
        assert f3.cell_count(l, m, 0, 0) == count
        assert cross_betti(f3, l, m, 0, 0).as_dict() == f3_manifest["cross_betti_00"][pair]
    _, L1 = hodge_laplacians(f3)
    assert eig_sym(L1, psd=True).kernel_dim() == f3_manifest["harmonic_dim_L1"]


def test_signal_round_trip(tmp_path, tri):
    v = np.array([0.1, -1 / 3, 2.0 ** -40])
    path = write_signals(tmp_path / "s.csv", tri.flatten().edges, v)
    back = read_signals(path, tri.flatten().edges, tri)
    assert back[:, 0].tolist() == v.tolist()
    # rows are matched by id, not position
    assert read_signals(path, ("x2", "e1"), tri)[:, 0].tolist() == [v[2], v[0]]


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, (4, 3), elements=st.floats(allow_nan=False, allow_infinity=False)))
def test_signal_csv_exact(values):
    ids, back = parse_signal_table(signals_csv(list("abcd"), values))
    assert ids == list("abcd")
    assert np.array_equal(back, values)


def test_signal_errors(tmp_path, tri):
    edges = tri.flatten().edges
    path = tmp_path / "s.csv"
    path.write_text("cell_id,value\ne1,1\nzz,2\nx1,0\nx2,0\n")
    with pytest.raises(UnknownCellId):
        read_signals(path, edges, tri)
    path.write_text("cell_id,value\ne1,1\n")
    with pytest.raises(IndexMismatch):
        read_signals(path, edges, tri)
    for bad in ("id,value\ne1,1\n", "cell_id,value\ne1,x\n", "cell_id,value\ne1,1,2\n",
                "cell_id,value\ne1,1\ne1,2\n", "cell_id,value\ne1,nan\n", ""):
        with pytest.raises(ParseError):
            parse_signal_table(bad)
    with pytest.raises(IndexMismatch):
        signals_csv(edges, np.ones(2))


def test_table_and_fmt():
    assert fmt(None) == "" and fmt(True) == "true" and fmt(np.int64(3)) == "3"
    assert float(fmt(0.1)) == 0.1
    assert table_csv(["a", "b"], [[1, 0.5]]) == "a,b\n1,0.5\n"
    assert canonical_json({"b": np.float64(1.0), "a": np.arange(2)}) == '{\n  "a": [\n    0,\n    1\n  ],\n  "b": 1.0\n}\n'


def test_write_matrix(tmp_path):
    path = write_matrix(tmp_path / "m.csv", ["r1", "r2"], ["c1", "c2"], np.array([[0, -1], [2, 0]]))
    assert path.read_text() == "row_id,col_id,value\nr1,c2,-1\nr2,c1,2\n"
