"""File formats: Matrix Market graphs and CSV / raw-float signals.

All user-facing node ids are 1-based (the Matrix Market convention);
conversion to internal 0-based indices happens here and nowhere else.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import (
    DuplicateNodeError,
    MissingNodeError,
    NotSymmetricError,
    ParseError,
)
from .graphs import Graph, make_graph

_MM_HEADER = "%%matrixmarket"


def read_matrix_market(path) -> Graph:
    """Read a real square matrix in Matrix Market format as a Graph.

    Supports coordinate and array formats with the general or symmetric
    qualifier; the symmetric qualifier stores the lower triangle, which is
    mirrored on read.  A general-format matrix that is not exactly
    symmetric is rejected.

    Raises
    ------
    ParseError
        On any malformed content, with the offending line number.
    NotSymmetricError
        If a general-format matrix is asymmetric.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    if not lines:
        raise ParseError("empty file", line=1)

    header = lines[0].strip().lower().split()
    if len(header) != 5 or header[0] != _MM_HEADER or header[1] != "matrix":
        raise ParseError("expected '%%MatrixMarket matrix <format> <field> <symmetry>'", line=1)
    fmt, field, symmetry = header[2], header[3], header[4]
    if fmt not in ("coordinate", "array"):
        raise ParseError(f"unsupported format {fmt!r}", line=1)
    if field not in ("real", "integer"):
        raise ParseError(f"unsupported field {field!r} (need real values)", line=1)
    if symmetry not in ("general", "symmetric"):
        raise ParseError(f"unsupported symmetry {symmetry!r}", line=1)

    # Skip comments and blanks; keep (lineno, text) for diagnostics.
    body = [
        (no, text.strip())
        for no, text in enumerate(lines[1:], start=2)
        if text.strip() and not text.lstrip().startswith("%")
    ]
    if not body:
        raise ParseError("missing size line", line=len(lines))
    size_no, size_line = body[0]
    entries = body[1:]

    if fmt == "coordinate":
        a = _read_coordinate(size_line, size_no, entries, symmetry)
    else:
        a = _read_array(size_line, size_no, entries, symmetry)

    if symmetry == "general" and not np.array_equal(a, a.T):
        raise NotSymmetricError("general-format matrix is not symmetric")
    return make_graph(a)


def _parse_size(size_line, lineno, want_fields):
    parts = size_line.split()
    if len(parts) != want_fields:
        raise ParseError(f"size line needs {want_fields} fields", line=lineno)
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise ParseError("size line must be integers", line=lineno) from None
    if any(v < 0 for v in nums):
        raise ParseError("size values must be non-negative", line=lineno)
    return nums


def _read_coordinate(size_line, size_no, entries, symmetry):
    rows, cols, nnz = _parse_size(size_line, size_no, 3)
    if rows != cols:
        raise ParseError(f"matrix is {rows}x{cols}, graphs must be square", line=size_no)
    if len(entries) != nnz:
        where = entries[nnz][0] if len(entries) > nnz else size_no
        raise ParseError(
            f"expected {nnz} entries, found {len(entries)}", line=where
        )
    a = np.zeros((rows, cols))
    seen = set()
    for lineno, text in entries:
        parts = text.split()
        if len(parts) != 3:
            raise ParseError("entry needs 'row col value'", line=lineno)
        try:
            i, j, v = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise ParseError(f"bad entry {text!r}", line=lineno) from None
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise ParseError(f"index ({i},{j}) outside 1..{rows}", line=lineno)
        # Symmetric files conventionally store the lower triangle; accept
        # either orientation and mirror, but reject conflicting pairs.
        key = (min(i, j), max(i, j)) if symmetry == "symmetric" else (i, j)
        if key in seen:
            raise ParseError(f"duplicate entry ({i},{j})", line=lineno)
        seen.add(key)
        a[i - 1, j - 1] = v
        if symmetry == "symmetric":
            a[j - 1, i - 1] = v
    return a


def _read_array(size_line, size_no, entries, symmetry):
    rows, cols = _parse_size(size_line, size_no, 2)
    if rows != cols:
        raise ParseError(f"matrix is {rows}x{cols}, graphs must be square", line=size_no)
    if symmetry == "symmetric":
        want = rows * (rows + 1) // 2
    else:
        want = rows * cols
    if len(entries) != want:
        raise ParseError(
            f"expected {want} values, found {len(entries)}",
            line=entries[-1][0] if entries else size_no,
        )
    vals = []
    for lineno, text in entries:
        try:
            vals.append(float(text))
        except ValueError:
            raise ParseError(f"bad value {text!r}", line=lineno) from None
    a = np.zeros((rows, cols))
    pos = 0
    for j in range(cols):
        start = j if symmetry == "symmetric" else 0
        for i in range(start, rows):
            a[i, j] = vals[pos]
            if symmetry == "symmetric":
                a[j, i] = vals[pos]
            pos += 1
    return a


def write_matrix_market(path, g: Graph, comments=()):
    """Write a graph as a Matrix Market coordinate file.

    Symmetric graphs use the symmetric qualifier (lower triangle only).
    """
    sym = "symmetric" if g.symmetric else "general"
    a = g.shift
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"%%MatrixMarket matrix coordinate real {sym}\n")
        for c in comments:
            fh.write(f"% {c}\n")
        rows, cols = np.nonzero(a)
        if g.symmetric:
            keep = rows >= cols
            rows, cols = rows[keep], cols[keep]
        fh.write(f"{g.n} {g.n} {len(rows)}\n")
        for i, j in zip(rows, cols):
            fh.write(f"{i + 1} {j + 1} {a[i, j]:.17g}\n")


def read_signal(path, fmt: str = "csv") -> np.ndarray:
    """Read a signal vector; fmt is 'csv' (node,value rows) or 'f64le'."""
    if fmt == "f64le":
        if os.path.getsize(path) % 8 != 0:
            raise ParseError("f64le file length is not a multiple of 8 bytes")
        return np.fromfile(path, dtype="<f8").astype(np.float64)
    if fmt != "csv":
        raise ParseError(f"unknown signal format {fmt!r}")

    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    rows = [
        (no, text.strip())
        for no, text in enumerate(lines, start=1)
        if text.strip() and not text.lstrip().startswith("#")
    ]
    if not rows or rows[0][1].replace(" ", "") != "node,value":
        raise ParseError(
            "expected header 'node,value'", line=rows[0][0] if rows else 1
        )
    values = {}
    for lineno, text in rows[1:]:
        parts = text.split(",")
        if len(parts) != 2:
            raise ParseError("row needs 'node,value'", line=lineno)
        try:
            node, value = int(parts[0]), float(parts[1])
        except ValueError:
            raise ParseError(f"bad row {text!r}", line=lineno) from None
        if node in values:
            raise DuplicateNodeError(f"node {node} listed twice (line {lineno})")
        if node < 1:
            raise ParseError(f"node ids are 1-based, got {node}", line=lineno)
        values[node] = value
    if not values:
        raise ParseError("signal file lists no nodes", line=len(lines))
    n = max(values)
    missing = set(range(1, n + 1)) - set(values)
    if missing:
        raise MissingNodeError(f"missing node(s) {sorted(missing)[:5]} of 1..{n}")
    return np.array([values[i] for i in range(1, n + 1)])


def write_csv_table(path, columns, rows, comments=()):
    """Write a CSV table with '#'-prefixed metadata comment lines."""
    with open(path, "w", encoding="utf-8") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(str(v) for v in row) + "\n")


def read_csv_table(path):
    """Read a CSV table written by write_csv_table.

    Returns (columns, rows, comments); every cell comes back as a string.
    """
    comments, columns, rows = [], None, []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.rstrip("\n")
            if not text.strip():
                continue
            if text.lstrip().startswith("#"):
                comments.append(text.lstrip()[1:].strip())
                continue
            cells = text.split(",")
            if columns is None:
                columns = cells
            else:
                if len(cells) != len(columns):
                    raise ParseError(
                        f"row has {len(cells)} cells, header has {len(columns)}",
                        line=lineno,
                    )
                rows.append(cells)
    if columns is None:
        raise ParseError("csv file has no header", line=1)
    return columns, rows, comments


def write_signal(path, x, fmt: str = "csv", comments=()):
    """Write a signal vector; decimal rendering uses 17 significant digits
    so csv round-trips within 1 ulp (f64le round-trips bit-exactly)."""
    x = np.asarray(x, dtype=np.float64)
    if fmt == "f64le":
        x.astype("<f8").tofile(path)
        return
    if fmt != "csv":
        raise ParseError(f"unknown signal format {fmt!r}")
    with open(path, "w", encoding="utf-8") as fh:
        for c in comments:
            fh.write(f"# {c}\n")
        fh.write("node,value\n")
        for i, v in enumerate(x, start=1):
            fh.write(f"{i},{v:.17g}\n")
