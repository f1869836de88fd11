"""Deterministic, finite-guarded CSV/JSON emission.

All writers share three rules so that identical inputs produce
byte-identical files on any platform: floats are rendered with 17
significant digits (round-trip exact for doubles, '.' decimal separator),
line endings are '\\n', and files are written atomically (temp file in the
target directory, then rename).  Non-finite values never reach an output
file; they raise instead.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ReportRow",
    "format_float",
    "write_text_atomic",
    "write_csv",
    "write_json",
    "report_rows_csv",
    "report_rows_json",
    "write_spectrum_csv",
    "write_eigenvectors_csv",
    "export_dictionary",
]


def format_float(x) -> str:
    """17-significant-digit decimal rendering; raises on NaN/Inf."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"refusing to serialize non-finite value {x!r}")
    return format(x, ".17g")


def write_text_atomic(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format_float(value)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    write_text_atomic(path, "\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            raise ValueError(f"refusing to serialize non-finite value {x!r}")
        return x
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def write_json(path, obj) -> None:
    text = json.dumps(_jsonable(obj), indent=2, sort_keys=True)
    write_text_atomic(path, text + "\n")


@dataclass(frozen=True)
class ReportRow:
    """One verification or experiment result."""

    experiment: str
    params: str
    metric: str
    value: float
    tolerance: float | None
    passed: bool

    def key(self):
        return (self.experiment, self.params, self.metric)


REPORT_HEADER = ("experiment", "params", "metric", "value", "tolerance", "passed")


def _sorted_rows(rows: Sequence[ReportRow]) -> list[ReportRow]:
    return sorted(rows, key=ReportRow.key)


def report_rows_csv(path, rows: Sequence[ReportRow]) -> None:
    write_csv(path, REPORT_HEADER,
              [(r.experiment, r.params, r.metric, r.value,
                "" if r.tolerance is None else format_float(r.tolerance),
                r.passed)
               for r in _sorted_rows(rows)])


def report_rows_json(path, rows: Sequence[ReportRow]) -> None:
    write_json(path, [
        {"experiment": r.experiment, "params": r.params, "metric": r.metric,
         "value": r.value, "tolerance": r.tolerance, "passed": bool(r.passed)}
        for r in _sorted_rows(rows)])


def write_spectrum_csv(path, eigenvalues: np.ndarray) -> None:
    """Two columns: index, eigenvalue (descending order as given)."""
    write_csv(path, ("index", "eigenvalue"),
              [(i, v) for i, v in enumerate(np.asarray(eigenvalues, float))])


def write_eigenvectors_csv(path, vectors: np.ndarray) -> None:
    """Eigenvector matrix (columns are vectors) with re/im column pairs."""
    vectors = np.asarray(vectors)
    n, k = vectors.shape
    header = ["index"]
    for j in range(k):
        header += [f"v{j:03d}_re", f"v{j:03d}_im"]
    rows = []
    for i in range(n):
        row: list = [i]
        for j in range(k):
            z = complex(vectors[i, j])
            row += [z.real, z.imag]
        rows.append(row)
    write_csv(path, header, rows)


def _matrix_csv(path, a: np.ndarray) -> None:
    a = np.asarray(a)
    header = []
    for j in range(a.shape[1]):
        header += [f"c{j:03d}_re", f"c{j:03d}_im"]
    rows = []
    for i in range(a.shape[0]):
        row: list = []
        for j in range(a.shape[1]):
            z = complex(a[i, j])
            row += [z.real, z.imag]
        rows.append(row)
    write_csv(path, header, rows)


def export_dictionary(d, directory) -> Path:
    """Write a dictionary as one CSV per atom plus a JSON manifest.

    The manifest records ordering, provenance and eigenvalues; atom files
    are named ``atom_<k>.csv`` in dictionary order.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {"source": d.source, "grid": list(d.grid.dims),
                "atom_count": len(d.atoms), "atoms": []}
    for k, atom in enumerate(d.atoms):
        name = f"atom_{k:04d}.csv"
        _matrix_csv(directory / name, atom.tensor)
        manifest["atoms"].append({
            "file": name,
            "position": k,
            "source": atom.source,
            "eigenvalue": atom.eigenvalue,
            "rank": atom.rank,
            "band": atom.band,
            "dpss_indices": list(atom.indices) if atom.indices else None,
        })
    write_json(directory / "manifest.json", manifest)
    return directory
