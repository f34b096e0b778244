"""Tabular output: CSV, aligned text and JSON, with deterministic number formatting."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Sequence

SIGNIFICANT_DIGITS = 12


def fmt_number(x, exact: bool = False) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x) if exact else format(float(x), f".{SIGNIFICANT_DIGITS}g")
    if isinstance(x, float):
        return format(x, f".{SIGNIFICANT_DIGITS}g")
    return str(x)


def render(header: Sequence[str], rows: Iterable[Sequence], fmt: str = "csv",
           exact: bool = False, comments: Sequence[str] = ()) -> str:
    cells = [[fmt_number(v, exact) for v in row] for row in rows]
    if fmt == "csv":
        buf = io.StringIO()
        for line in comments:
            buf.write(f"# {line}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(cells)
        return buf.getvalue()
    if fmt == "json":
        return json.dumps({"comments": list(comments),
                           "rows": [dict(zip(header, row)) for row in cells]}, indent=2) + "\n"
    if fmt == "table":
        widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h)
                  for i, h in enumerate(header)]
        lines = [f"# {c}" for c in comments]
        lines.append("  ".join(h.rjust(w) for h, w in zip(header, widths)))
        lines.extend("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells)
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def read_sequence_csv(text: str) -> list:
    """Read ``index,value`` rows (header optional) into a list of Fractions."""
    values = {}
    for row in csv.reader(io.StringIO(text)):
        if not row or row[0].lstrip().startswith("#"):
            continue
        if len(row) < 2:
            raise ValueError(f"expected index,value but got {row!r}")
        try:
            idx = int(row[0])
        except ValueError:
            continue  # header
        values[idx] = Fraction(row[1].strip())
    if sorted(values) != list(range(len(values))):
        raise ValueError("indices must run 0..K without gaps")
    return [values[i] for i in range(len(values))]
