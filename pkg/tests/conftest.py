import json
from pathlib import Path

import pytest

from cmctsp.complex import build_complex

DATA = Path(__file__).resolve().parents[1] / "src" / "cmctsp" / "data"

_criteria: dict[int, tuple[str, str]] = {}


def load_spec(name: str) -> dict:
    return json.loads((DATA / f"{name}.json").read_text())


def tetra_spec() -> dict:
    """Two nodes per layer, all four cross-edges, every triangle filled and
    the resulting sphere filled by one (1,1) cell."""
    spec = {
        "layers": [{"id": 1, "nodes": ["a", "b"]}, {"id": 2, "nodes": ["p", "q"]}],
        "intra_edges": [{"layer": 1, "id": "ab", "tail": "a", "head": "b"},
                        {"layer": 2, "id": "pq", "tail": "p", "head": "q"}],
        "cross_edges": [{"layers": [1, 2], "id": f"{u}{v}", "tail": u, "head": v} for u in "ab" for v in "pq"],
    }
    faces = {
        "f_apq": [("ap", 1), ("pq", 1), ("aq", -1)],
        "f_bpq": [("bp", 1), ("pq", 1), ("bq", -1)],
        "f_abp": [("ab", 1), ("bp", 1), ("ap", -1)],
        "f_abq": [("ab", 1), ("bq", 1), ("aq", -1)],
    }
    spec["two_cells"] = [{"scope": [1, 2], "id": cid, "boundary": [{"edge_id": e, "sign": s} for e, s in bnd]}
                         for cid, bnd in faces.items()]
    spec["higher_cells"] = [{"scope": [1, 2], "id": "vol", "order": 3, "boundary": [
        {"cell_id": c, "sign": s} for c, s in (("f_apq", 1), ("f_bpq", -1), ("f_abp", 1), ("f_abq", -1))]}]
    return spec


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def tri():
    return build_complex(load_spec("tri"))


@pytest.fixture(scope="session")
def fig2():
    return build_complex(load_spec("fig2"))


@pytest.fixture(scope="session")
def fig3():
    return build_complex(load_spec("fig3"))


@pytest.fixture(scope="session")
def f3():
    return build_complex(load_spec("f3"))


@pytest.fixture(scope="session")
def f3_manifest():
    return json.loads((DATA / "f3_manifest.json").read_text())


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.passed else "FAIL"
        _criteria[number] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status, title = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}")
