"""Plot-ready CSV output.

Files start with optional ``# key: value`` metadata lines followed by one
header row and the data rows.  Floats are written with 17 significant
digits so that reading them back reproduces every bit.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = ["format_value", "write_csv", "read_csv"]


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            raise ValueError(f"non-finite value {v} cannot be written")
        return "%.17g" % v
    return str(v)


def write_csv(rows: Iterable[Sequence], path, columns: Sequence[str],
              metadata: Mapping[str, object] | None = None) -> Path:
    """Write ``rows`` under a header of ``columns`` (names carry units)."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as fh:
            for key, value in (metadata or {}).items():
                fh.write(f"# {key}: {format_value(value)}\n")
            writer = csv.writer(fh, lineterminator="\r\n")
            writer.writerow(columns)
            for row in rows:
                if len(row) != len(columns):
                    raise ValueError(f"row has {len(row)} fields, expected {len(columns)}")
                writer.writerow([format_value(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def read_csv(path):
    """Return ``(metadata, columns, rows)``; numeric fields come back as floats."""
    meta, lines = {}, []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("# ") and not lines:
                key, _, value = line[2:].rstrip("\r\n").partition(": ")
                meta[key] = value
            else:
                lines.append(line)
    reader = csv.reader(lines)
    columns = next(reader)
    rows = []
    for raw in reader:
        row = []
        for field in raw:
            try:
                row.append(float(field))
            except ValueError:
                row.append(field)
        rows.append(row)
    return meta, columns, rows
