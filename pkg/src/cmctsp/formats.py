"""File formats: complex JSON, signal and matrix CSV, report JSON.

JSON is written canonically (sorted keys, two-space indent, trailing
newline).  Floats in CSV use 17 significant digits so values survive a
round trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .complex import CellMultiComplex, build_complex, to_spec
from .errors import CMCError, IndexMismatch, ParseError, UnknownCellId


def fmt(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def canonical_json(obj: Any) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def write_json(path: str | Path, obj: Any) -> Path:
    path = Path(path)
    path.write_text(canonical_json(obj))
    return path


# --- complexes ---------------------------------------------------------------

def parse_complex(text: str, source: str = "<string>") -> CellMultiComplex:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return build_complex(raw)
    except CMCError as exc:
        raise type(exc)(f"{source}: {exc}") from None


def read_complex(path: str | Path) -> CellMultiComplex:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from None
    return parse_complex(text, str(path))


def complex_json(X: CellMultiComplex) -> str:
    return canonical_json(to_spec(X))


def write_complex(X: CellMultiComplex, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(complex_json(X))
    return path


# --- CSV ---------------------------------------------------------------------

def table_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_table(path: str | Path, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.write_text(table_csv(columns, rows))
    return path


def signals_csv(index: Sequence[str], values: np.ndarray) -> str:
    V = np.asarray(values, dtype=float)
    if V.ndim == 1:
        V = V[:, None]
    if V.shape[0] != len(index):
        raise IndexMismatch(f"{V.shape[0]} rows of values for {len(index)} cells")
    header = ["cell_id", "value"] if V.shape[1] == 1 else ["cell_id"] + [f"t{j + 1}" for j in range(V.shape[1])]
    return table_csv(header, ([cid, *row] for cid, row in zip(index, V.tolist())))


def write_signals(path: str | Path, index: Sequence[str], values: np.ndarray) -> Path:
    path = Path(path)
    path.write_text(signals_csv(index, values))
    return path


def parse_signal_table(text: str, source: str = "<string>") -> tuple[list[str], np.ndarray]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError(f"{source}: empty signal file")
    header = [h.strip() for h in rows[0]]
    if len(header) < 2 or header[0] != "cell_id":
        raise ParseError(f"{source}:1: header must start with cell_id followed by value columns")
    ids, data = [], []
    seen = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"{source}:{lineno}: expected {len(header)} fields, got {len(row)}")
        cid = row[0].strip()
        if cid in seen:
            raise ParseError(f"{source}:{lineno}: duplicate cell_id {cid!r}")
        seen.add(cid)
        try:
            vals = [float(c) for c in row[1:]]
        except ValueError:
            raise ParseError(f"{source}:{lineno}: non-numeric value in row for {cid!r}") from None
        if not all(math.isfinite(v) for v in vals):
            raise ParseError(f"{source}:{lineno}: non-finite value in row for {cid!r}")
        ids.append(cid)
        data.append(vals)
    return ids, np.array(data, dtype=float).reshape(len(ids), len(header) - 1)


def align_signals(
    ids: Sequence[str], values: np.ndarray, index: Sequence[str], X: CellMultiComplex | None = None
) -> np.ndarray:
    """Rows of ``values`` reordered to ``index``.

    Ids not in the complex raise :class:`UnknownCellId`; ids of the complex
    outside ``index`` are dropped; cells of ``index`` missing from the file
    raise :class:`IndexMismatch`.
    """
    pos = {c: i for i, c in enumerate(ids)}
    if X is not None:
        unknown = [c for c in ids if c not in X]
        if unknown:
            raise UnknownCellId(f"signal rows name cells not in the complex: {unknown[:5]}")
    missing = [c for c in index if c not in pos]
    if missing:
        raise IndexMismatch(f"signal file has no rows for {len(missing)} cells, e.g. {missing[:5]}")
    return values[[pos[c] for c in index]]


def read_signals(path: str | Path, index: Sequence[str], X: CellMultiComplex | None = None) -> np.ndarray:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from None
    ids, values = parse_signal_table(text, str(path))
    return align_signals(ids, values, index, X)


def matrix_rows(rows: Sequence[str], cols: Sequence[str], M: np.ndarray) -> list[list[Any]]:
    """Nonzero entries as ``[row_id, col_id, value]`` in row-major order."""
    M = np.asarray(M)
    out = []
    for i, j in zip(*np.nonzero(M)):
        out.append([rows[i], cols[j], M[i, j]])
    return out


def write_matrix(path: str | Path, rows: Sequence[str], cols: Sequence[str], M) -> Path:
    if hasattr(M, "toarray"):
        M = M.toarray()
    return write_table(path, ["row_id", "col_id", "value"], matrix_rows(rows, cols, M))
