"""Figure rendering for the report path.

Each table command has a companion figure written next to the table file.
Figures are rendered off-screen and saved with date metadata stripped, so
repeated runs of the same configuration produce identical bytes.
"""

from __future__ import annotations

import math
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["render_figures"]

_RC = {
    "figure.figsize": (7.2, 4.5),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.markersize": 4,
}


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, metadata={"Date": None})
    plt.close(fig)
    return path


def _ok(row) -> bool:
    return row.get("status") == "ok"


def _figure_eval(rows, path: Path):
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        series = defaultdict(list)
        for r in filter(_ok, rows):
            series[(r["function"], r["nu"], r["n"])].append((r["x"], r["value"]))
        for (label, nu, n), pts in sorted(series.items()):
            pts.sort()
            ax.plot(*zip(*pts), marker="o", lw=1,
                    label=f"{label}, n={n}, nu={nu:g}")
        ax.set_xlabel("x")
        ax.set_ylabel("operator value")
        ax.set_title("Operator evaluation")
        if len(series) <= 18:
            ax.legend(ncol=2)
        return _save(fig, path)


def _figure_moments(rows, path: Path):
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(1, 2, figsize=(9.6, 4.2))
        for ax, field, name in ((axes[0], "psi2", "second central moment"),
                                (axes[1], "psi4", "fourth central moment")):
            series = defaultdict(list)
            for r in filter(_ok, rows):
                if r.get(field) is not None:
                    series[(r["nu"], r["x"])].append((r["n"], r[field]))
            for (nu, x), pts in sorted(series.items()):
                pts.sort()
                ax.plot(*zip(*pts), marker="o", lw=1, alpha=0.7,
                        label=f"x={x:g}, nu={nu:g}")
            ax.set_xscale("log")
            ax.set_yscale("log")
            ax.set_xlabel("n")
            ax.set_title(name)
        axes[0].legend(ncol=2)
        fig.tight_layout()
        return _save(fig, path)


def _figure_bounds(rows, path: Path):
    """Minimum relative margin per inequality and order: all safely >= 0."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        series = defaultdict(dict)
        for r in filter(_ok, rows):
            rel = r["margin"] / max(1.0, abs(r["rhs"]))
            key = r["inequality_id"]
            n = r["n"]
            series[key][n] = min(series[key].get(n, math.inf), rel)
        for key, by_n in sorted(series.items()):
            pts = sorted(by_n.items())
            ax.plot(*zip(*pts), marker="o", lw=1, label=key)
        ax.axhline(0.0, color="k", lw=1)
        ax.set_xscale("log")
        ax.set_yscale("symlog", linthresh=1e-12)
        ax.set_xlabel("n")
        ax.set_ylabel("min relative margin (rhs - lhs)")
        ax.set_title("Moment-bound margins over the grid")
        ax.legend(ncol=2)
        return _save(fig, path)


def _figure_rates(rows, path: Path):
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        series = defaultdict(list)
        for r in filter(_ok, rows):
            if r.get("lhs") is not None and r.get("lhs") > 0:
                series[(r["theorem_id"], r["function"], r["nu"])].append(
                    (r["n"], r["lhs"])
                )
        for (tid, label, nu), pts in sorted(series.items()):
            pts.sort()
            ax.plot(*zip(*pts), marker="o", lw=1, alpha=0.8,
                    label=f"{tid} {label} nu={nu:g}")
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("n")
        ax.set_ylabel("measured deviation")
        ax.set_title("Convergence of the rate-check left-hand sides")
        if len(series) <= 20:
            ax.legend(ncol=2)
        return _save(fig, path)


_RENDERERS = {
    "eval": _figure_eval,
    "moments": _figure_moments,
    "bounds": _figure_bounds,
    "rates": _figure_rates,
}


def render_figures(rows, table_path: str | Path) -> list[Path]:
    """Render one figure per command present in ``rows`` next to the table.

    Returns the list of files written, named ``<table stem>_<command>.png``.
    """
    table_path = Path(table_path)
    by_command = defaultdict(list)
    for r in rows:
        by_command[r.get("command")].append(r)
    written = []
    for command, renderer in _RENDERERS.items():
        subset = by_command.get(command)
        if subset:
            out = table_path.with_name(f"{table_path.stem}_{command}.png")
            written.append(renderer(subset, out))
    return written
