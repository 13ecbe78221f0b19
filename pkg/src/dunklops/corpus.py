"""Built-in test functions and the sampled-table loader.

The corpus covers every hypothesis class the rate checks need: monomials
for the moment machinery, Lipschitz samples of order 1 and 1/2, twice
continuously differentiable bounded functions, and a bounded-limit
function for the weighted space (g / (1 + x^2) convergent).
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import MalformedTable, NonMonotoneAbscissae
from .operators import TestFunction

__all__ = ["corpus", "get_function", "load_sampled_function"]


def _saturating(s: float) -> float:
    return s * s / (1.0 + s * s)


def _saturating_d1(s: float) -> float:
    return 2.0 * s / (1.0 + s * s) ** 2


def _saturating_d2(s: float) -> float:
    return (2.0 - 6.0 * s * s) / (1.0 + s * s) ** 3


def _build() -> dict[str, TestFunction]:
    fns = [
        TestFunction("one", lambda s: 1.0, 0, lipschitz=(1.0, 1.0),
                     d1=lambda s: 0.0, d2=lambda s: 0.0),
        TestFunction("s", lambda s: s, 1, lipschitz=(1.0, 1.0)),
        TestFunction("s2", lambda s: s * s, 2),
        TestFunction("s3", lambda s: s**3, 3),
        TestFunction("s4", lambda s: s**4, 4),
        # |exp(-s) - exp(-t)| <= |s - t|; all derivatives bounded by 1.
        TestFunction("exp_decay", lambda s: math.exp(-s), 0, lipschitz=(1.0, 1.0),
                     d1=lambda s: -math.exp(-s), d2=lambda s: math.exp(-s)),
        # |sqrt(s) - sqrt(t)| <= sqrt(|s - t|): Lipschitz class of order 1/2.
        TestFunction("sqrt", lambda s: math.sqrt(s), 1, lipschitz=(1.0, 0.5)),
        TestFunction("abs_dev", lambda s: abs(s - 1.0), 1, lipschitz=(1.0, 1.0)),
        # Bounded with g -> 1, so g/(1+x^2) -> 0: a weighted-space sample.
        # |g'| peaks at 3*sqrt(3)/8 < 1, so it is also Lipschitz of order 1.
        TestFunction("saturating", _saturating, 0, lipschitz=(1.0, 1.0),
                     d1=_saturating_d1, d2=_saturating_d2),
    ]
    return {f.label: f.validated() for f in fns}


_CORPUS = _build()


def corpus() -> dict[str, TestFunction]:
    """All built-in functions keyed by label."""
    return dict(_CORPUS)


def get_function(label: str) -> TestFunction:
    try:
        return _CORPUS[label]
    except KeyError:
        raise KeyError(
            f"unknown function {label!r}; built-ins: {sorted(_CORPUS)}"
        ) from None


def load_sampled_function(path: str | Path) -> TestFunction:
    """TestFunction from a two-column (x, g(x)) table.

    Abscissae must be strictly increasing and start at 0.  Values are
    interpolated piecewise-linearly and extended as a constant beyond the
    last sample.  An optional header comment ``# growth_degree: d``
    declares the growth; without it the constant extension makes degree 0
    the honest default.
    """
    path = Path(path)
    degree = 0
    rows = []
    try:
        text = path.read_text()
    except OSError as exc:
        raise MalformedTable(f"cannot read {path}: {exc}") from exc
    for line_no, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if body.lower().startswith("growth_degree"):
                try:
                    degree = int(body.split(":", 1)[1])
                except (IndexError, ValueError) as exc:
                    raise MalformedTable(
                        f"{path}:{line_no}: bad growth_degree header"
                    ) from exc
            continue
        parts = stripped.replace(",", " ").split()
        if len(parts) != 2:
            raise MalformedTable(
                f"{path}:{line_no}: expected two numeric columns, got {stripped!r}"
            )
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise MalformedTable(f"{path}:{line_no}: non-numeric entry") from exc
    if not rows:
        raise MalformedTable(f"{path}: no data rows")
    xs = np.array([r[0] for r in rows])
    vs = np.array([r[1] for r in rows])
    if xs[0] != 0.0:
        raise NonMonotoneAbscissae(f"{path}: abscissae must start at 0")
    if np.any(np.diff(xs) <= 0):
        raise NonMonotoneAbscissae(f"{path}: abscissae must be strictly increasing")

    def interp(s: float) -> float:
        return float(np.interp(s, xs, vs))  # np.interp clamps beyond the ends

    return TestFunction(f"table:{path.name}", interp, degree).validated(
        probe_to=max(float(xs[-1]), 1.0)
    )
