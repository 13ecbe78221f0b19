"""Flat result rows and lossless CSV/JSON serialization.

Every row carries the numeric-policy fingerprint that produced it, so a
table is reproducible from its own content.  Doubles are printed with 17
significant digits in CSV (and native repr in JSON), which round-trips
exactly; ordering is fixed to (command, function, id, nu, n, x), so two
runs of the same configuration produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .core import SeriesPolicy
from .kernels import QuadraturePolicy
from .moments import BoundReport, MomentSet
from .rates import RateReport

__all__ = [
    "COLUMNS",
    "fingerprint",
    "eval_row",
    "moment_rows",
    "bound_rows",
    "rate_rows",
    "sort_rows",
    "write_rows",
    "read_rows",
]

# Superset of all row fields, in canonical column order.
COLUMNS = [
    "command",
    "theorem_id",
    "inequality_id",
    "function",
    "nu",
    "n",
    "x",
    "value",
    "raw0",
    "raw1",
    "raw2",
    "raw3",
    "raw4",
    "psi1",
    "psi2",
    "psi4",
    "lhs",
    "rhs",
    "margin",
    "fitted_constant",
    "empirical_order",
    "pass",
    "status",
    "notes",
    "series_rel_tol",
    "series_max_terms",
    "quad_abs_tol",
    "quad_rel_tol",
]

_FLOAT_FIELDS = {
    "nu", "x", "value", "raw0", "raw1", "raw2", "raw3", "raw4",
    "psi1", "psi2", "psi4", "lhs", "rhs", "margin", "fitted_constant",
    "empirical_order", "series_rel_tol", "quad_abs_tol", "quad_rel_tol",
}
_INT_FIELDS = {"n", "series_max_terms"}
_BOOL_FIELDS = {"pass"}


def fingerprint(series: SeriesPolicy, quad: QuadraturePolicy) -> dict:
    return {
        "series_rel_tol": series.rel_tol,
        "series_max_terms": series.max_terms,
        "quad_abs_tol": quad.abs_tol,
        "quad_rel_tol": quad.rel_tol,
    }


def eval_row(function: str, nu: float, n: int, x: float, value: float,
             fp: Mapping) -> dict:
    return {"command": "eval", "function": function, "nu": nu, "n": n,
            "x": x, "value": value, "status": "ok", **fp}


def moment_rows(sets: Iterable[MomentSet | tuple], fp: Mapping) -> list[dict]:
    """Rows from MomentSets; tuples (n, x, nu) mark skipped domain points."""
    rows = []
    for item in sets:
        if isinstance(item, MomentSet):
            rows.append({
                "command": "moments", "nu": item.nu, "n": item.n, "x": item.x,
                "raw0": item.raw[0], "raw1": item.raw[1], "raw2": item.raw[2],
                "raw3": item.raw[3], "raw4": item.raw[4],
                "psi1": item.psi1, "psi2": item.psi2, "psi4": item.psi3_fourth,
                "status": "ok", **fp,
            })
        else:
            n, x, nu = item
            rows.append({"command": "moments", "nu": nu, "n": n, "x": x,
                         "status": "skipped_domain", **fp})
    return rows


def bound_rows(reports: Iterable[BoundReport], fp: Mapping) -> list[dict]:
    rows = []
    for rep in reports:
        row = {"command": "bounds", "inequality_id": rep.inequality_id,
               "nu": rep.nu, "n": rep.n, "x": rep.x, "status": rep.status, **fp}
        if rep.status == "ok":
            row.update(lhs=rep.lhs, rhs=rep.rhs, margin=rep.margin,
                       **{"pass": rep.passed})
        rows.append(row)
    return rows


def rate_rows(reports: Iterable[RateReport], fp: Mapping) -> list[dict]:
    """One row per (theorem, function, nu, n), plus a summary row per report."""
    rows = []
    for rep in reports:
        base = {"command": "rates", "theorem_id": rep.theorem_id,
                "function": rep.function, "nu": rep.nu, **fp}
        for i, n in enumerate(rep.n_grid):
            row = dict(base, n=n, status="ok", **{"pass": rep.passed})
            if i < len(rep.lhs):
                row["lhs"] = rep.lhs[i]
            if i < len(rep.rhs):
                row["rhs"] = rep.rhs[i]
            rows.append(row)
        summary = dict(base, status="summary", notes=rep.notes,
                       **{"pass": rep.passed})
        if rep.fitted_constant is not None:
            summary["fitted_constant"] = rep.fitted_constant
        if rep.empirical_order is not None:
            summary["empirical_order"] = rep.empirical_order
        rows.append(summary)
    return rows


def _sort_key(row: Mapping):
    def num(field):
        v = row.get(field)
        if v is None or (isinstance(v, float) and math.isnan(v)):
            return -math.inf
        return float(v)

    return (
        str(row.get("command", "")),
        str(row.get("theorem_id", "")),
        str(row.get("inequality_id", "")),
        str(row.get("function", "")),
        str(row.get("status", "")),
        num("nu"),
        num("n"),
        num("x"),
    )


def sort_rows(rows: Sequence[Mapping]) -> list[dict]:
    return [dict(r) for r in sorted(rows, key=_sort_key)]


def _format_cell(field: str, value) -> str:
    if value is None:
        return ""
    if field in _BOOL_FIELDS:
        return "true" if value else "false"
    if field in _INT_FIELDS:
        return str(int(value))
    if field in _FLOAT_FIELDS:
        v = float(value)
        if math.isnan(v):
            return ""
        return format(v, ".17g")
    return str(value)


def write_rows(path: str | Path, rows: Sequence[Mapping], fmt: str = "csv") -> Path:
    """Write sorted rows as CSV or JSON; returns the path written."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = sort_rows(rows)
    used = [c for c in COLUMNS if any(c in r for r in rows)]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(used)
        for row in rows:
            writer.writerow([_format_cell(c, row.get(c)) for c in used])
        path.write_text(buf.getvalue())
    elif fmt == "json":
        payload = []
        for row in rows:
            obj = {}
            for c in used:
                v = row.get(c)
                if isinstance(v, float) and math.isnan(v):
                    v = None
                if c in _BOOL_FIELDS and v is not None:
                    v = bool(v)
                obj[c] = v
            payload.append(obj)
        path.write_text(json.dumps(payload, indent=1, allow_nan=False) + "\n")
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    return path


def read_rows(path: str | Path) -> list[dict]:
    """Parse a table written by write_rows back into typed rows."""
    path = Path(path)
    if path.suffix == ".json":
        return json.loads(path.read_text())
    out = []
    with path.open(newline="") as fh:
        for record in csv.DictReader(fh):
            row = {}
            for key, raw in record.items():
                if raw == "" or raw is None:
                    row[key] = None
                elif key in _BOOL_FIELDS:
                    row[key] = raw == "true"
                elif key in _INT_FIELDS:
                    row[key] = int(raw)
                elif key in _FLOAT_FIELDS:
                    row[key] = float(raw)
                else:
                    row[key] = raw
            out.append(row)
    return out
