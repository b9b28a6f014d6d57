"""Byte-stable CSV and JSON output with run metadata, written atomically."""

from __future__ import annotations

import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

from rdlab.analysis import CounterexampleReport, ExpansionReport, ScanReport
from rdlab.centroid import CountReport
from rdlab.convolution import NormEstimate, SparseFunction
from rdlab.enumeration import Ball

SCAN_HEADER = ("r", "sampler", "max_ratio", "bound", "pass")
COUNT_HEADER = ("mode", "fixed_element", "radius", "count", "stabilized")


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]], meta: dict | None = None) -> str:
    """CSV text; metadata goes first as ``# key=value`` comment lines."""
    buf = io.StringIO()
    for key, value in (meta or {}).items():
        buf.write(f"# {key}={value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def render_json(obj: dict, meta: dict | None = None) -> str:
    body = dict(obj)
    if meta:
        body = {"meta": dict(meta), **body}
    return json.dumps(body, indent=2, ensure_ascii=False) + "\n"


def read_csv(text: str) -> tuple[dict, list[dict]]:
    """Inverse of :func:`render_csv`: metadata and data rows."""
    meta, lines = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = value
        else:
            lines.append(line)
    return meta, list(csv.DictReader(lines))


def atomic_write(path: str | Path, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename; ``-`` is stdout."""
    if str(path) == "-":
        sys.stdout.write(text)
        return
    p = Path(path)
    fd, tmp = tempfile.mkstemp(dir=p.parent if str(p.parent) else ".", prefix=f".{p.name}.",
                               suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, p)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def _table(report) -> tuple[Sequence[str], list]:
    if isinstance(report, ScanReport):
        return SCAN_HEADER, [[row.row()[k] for k in SCAN_HEADER] for row in report.rows]
    if isinstance(report, Ball):
        return ("element", "length"), report.rows()
    if isinstance(report, SparseFunction):
        return ("element", "value"), [(e["element"], repr(e["value"]))
                                      for e in report.to_json()["entries"]]
    if isinstance(report, CountReport):
        report = [report]
    if isinstance(report, list) and all(isinstance(x, CountReport) for x in report):
        return COUNT_HEADER, [[x.row()[k] for k in COUNT_HEADER] for x in report]
    if isinstance(report, tuple) and len(report) == 2:
        header, rows = report
        return header, list(rows)
    raise TypeError(f"no CSV form for {type(report).__name__}")


def _json(report) -> dict:
    if isinstance(report, (ExpansionReport, CounterexampleReport, SparseFunction)):
        return report.to_json()
    if isinstance(report, NormEstimate):
        return report._asdict()
    if isinstance(report, ScanReport):
        return {"seed": report.seed, "trials": report.trials,
                "bound": None if report.bound is None else report.bound.to_json(),
                "rows": [row.row() | {"argmax": row.argmax} for row in report.rows]}
    if isinstance(report, CountReport):
        return report.row() | {"truncated": report.truncated}
    if isinstance(report, list) and all(isinstance(x, CountReport) for x in report):
        return {"counts": [x.row() | {"truncated": x.truncated} for x in report]}
    if isinstance(report, dict):
        return report
    raise TypeError(f"no JSON form for {type(report).__name__}")


def render(report, fmt: str, meta: dict | None = None) -> str:
    if fmt == "csv":
        header, rows = _table(report)
        return render_csv(header, rows, meta)
    if fmt == "json":
        return render_json(_json(report), meta)
    raise ValueError(f"unknown format {fmt!r}; use csv or json")


def emit_report(report, fmt: str, path: str | Path, meta: dict | None = None) -> None:
    """Render ``report`` and write it once, atomically."""
    atomic_write(path, render(report, fmt, meta))
