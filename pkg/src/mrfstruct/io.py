"""File formats: dataset CSV, edge-set files, and learning trace logs.

All writers produce deterministic bytes: floats are serialized with
``repr`` (shortest round-trip form), rows and edges in canonical order,
and line endings are always ``\\n``. Re-running a command with identical
inputs therefore reproduces identical files.

Dataset CSV layout::

    x0,x1,x2          <- variable names
    d:2,d:3,c         <- per-column kind tag (d:<cardinality> or c)
    0,2,0.73          <- data rows

Edge-set file layout::

    D=9               <- number of variables
    0 1               <- one "i j" pair per line, i < j, sorted
    0 3
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .core import Column, ColumnKind, Dataset, EdgeSet


def _fmt(value: float) -> str:
    return repr(float(value))


def fmt_float(value: float) -> str:
    """Shortest round-tripping decimal form; shared by every writer."""
    return _fmt(value)


def write_text_atomic(path: str | Path, text: str) -> None:
    """Write via a sibling temp file and rename, so a file is never partial."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def dataset_to_text(data: Dataset) -> str:
    lines = [",".join(data.var_names())]
    tags = []
    for col in data.columns:
        if col.kind is ColumnKind.DISCRETE:
            tags.append(f"d:{col.cardinality}")
        else:
            tags.append("c")
    lines.append(",".join(tags))
    for r in range(data.n_samples):
        cells = []
        for col in data.columns:
            v = col.values[r]
            cells.append(str(int(v)) if col.kind is ColumnKind.DISCRETE else _fmt(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_dataset_csv(data: Dataset, path: str | Path) -> None:
    write_text_atomic(path, dataset_to_text(data))


def read_dataset_csv(path: str | Path) -> Dataset:
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip() != ""]
    if len(lines) < 3:
        raise ValueError(f"{path}: expected names row, kind row, and data rows")
    names = tuple(lines[0].split(","))
    tags = lines[1].split(",")
    if len(tags) != len(names):
        raise ValueError(f"{path}: kind row width does not match names row")
    rows = [ln.split(",") for ln in lines[2:]]
    for ln_no, row in enumerate(rows, start=3):
        if len(row) != len(names):
            raise ValueError(f"{path}:{ln_no}: row width does not match header")
        if any(cell.strip() == "" for cell in row):
            raise ValueError(f"{path}:{ln_no}: missing value")
    cols = []
    for c, tag in enumerate(tags):
        raw = [row[c] for row in rows]
        if tag == "c":
            cols.append(Column(ColumnKind.CONTINUOUS, np.array([float(v) for v in raw])))
        elif tag.startswith("d:"):
            card = int(tag[2:])
            cols.append(
                Column(ColumnKind.DISCRETE, np.array([int(v) for v in raw]), card)
            )
        else:
            raise ValueError(f"{path}: bad kind tag {tag!r} (want 'c' or 'd:<n>')")
    return Dataset(tuple(cols), names=names)


def edges_to_text(es: EdgeSet) -> str:
    lines = [f"D={es.d}"]
    lines.extend(f"{i} {j}" for i, j in es.sorted_edges())
    return "\n".join(lines) + "\n"


def write_edges(es: EdgeSet, path: str | Path) -> None:
    write_text_atomic(path, edges_to_text(es))


def read_edges(path: str | Path) -> EdgeSet:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip() != ""]
    if not lines or not lines[0].startswith("D="):
        raise ValueError(f"{path}: first line must be 'D=<n_vars>'")
    d = int(lines[0][2:])
    pairs = []
    for ln in lines[1:]:
        i, j = ln.split()
        pairs.append((int(i), int(j)))
    return EdgeSet.from_pairs(d, pairs)


def trace_to_text(trace) -> str:
    """Serialize a learning trace: one `phase i j score accepted` line per step."""
    lines = [
        f"{s.phase} {s.i} {s.j} {_fmt(s.score)} {int(s.accepted)}" for s in trace
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def write_trace(trace, path: str | Path) -> None:
    write_text_atomic(path, trace_to_text(trace))
