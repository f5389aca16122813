"""Write a ReportBundle as CSV tables plus one structured summary (summary.json).

Floats are written with 12 significant digits.  Timing appears only in the summary,
so two runs of the same config and seed produce byte-identical CSV files.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from fractions import Fraction
from pathlib import Path

from .runner import ReportBundle


def fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return f"{x:.12g}"
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and (math.isinf(x) or math.isnan(x)):
        return fmt(x)
    if hasattr(x, "item"):
        return x.item()
    return x


def _write_atomic(path: Path, text: str):
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text(text)
        os.replace(tmp, path)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e


def table_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def emit_reports(bundle: ReportBundle, out_dir, fmt_name: str = "csv") -> list[Path]:
    """Write ``<table>.csv`` for every table and ``summary.json``; returns the paths written."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OSError(f"cannot create output directory {out}: {e.strerror or e}") from e
    written = []
    if fmt_name == "csv":
        for name, table in bundle.tables.items():
            p = out / f"{name}.csv"
            _write_atomic(p, table_text(table.columns, table.rows))
            written.append(p)
    summary = {"status": "ok", "tasks": sorted(bundle.summaries) or "no tasks",
               "summaries": bundle.summaries, "provenance": bundle.provenance}
    if fmt_name != "csv":
        summary["tables"] = {k: {"columns": list(t.columns), "rows": [[fmt(v) for v in r] for r in t.rows]}
                             for k, t in bundle.tables.items()}
    p = out / "summary.json"
    _write_atomic(p, json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n")
    written.append(p)
    return written
