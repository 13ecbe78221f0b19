"""Grid estimators for the three moduli of smoothness.

All three are supremum quantities over an unbounded domain; they are
estimated on a truncated uniform grid and are therefore lower estimates
of the true value.  Refining the grid can only increase the estimate,
which is what the rate checks rely on when an inequality looks violated.

    modulus          omega(g; delta)  = sup_{|s-t| <= delta} |g(s) - g(t)|
    second_modulus   omega2(g; delta) = sup_{0 < s <= delta} sup_x
                                        |g(x+2s) - 2 g(x+s) + g(x)|
    weighted_modulus Omega(g; delta)  = sup_{x, |h| <= delta}
                                        |g(x+h) - g(x)| / ((1+h^2)(1+x^2))
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DunklDomainError

__all__ = [
    "ModulusEstimate",
    "modulus",
    "second_modulus",
    "weighted_modulus",
]

DEFAULT_CAP = 20.0


@dataclass(frozen=True)
class ModulusEstimate:
    delta: float
    value: float
    domain_cap: float
    grid_step: float

    def __float__(self) -> float:
        return self.value


def _grid_values(g: Callable[[float], float], cap: float, step: float):
    xs = np.arange(0.0, cap + 0.5 * step, step)
    return xs, np.array([g(float(t)) for t in xs])


def _check_args(delta: float, cap: float, step: float) -> None:
    if not delta > 0:
        raise DunklDomainError(f"delta must be positive, got {delta}")
    if not cap > delta:
        raise DunklDomainError("domain cap must exceed delta")
    if not 0 < step <= delta:
        raise DunklDomainError("grid step must lie in (0, delta]")


def modulus(
    g: Callable[[float], float],
    delta: float,
    cap: float = DEFAULT_CAP,
    step: float | None = None,
) -> ModulusEstimate:
    """First modulus of continuity on [0, cap], estimated over grid pairs."""
    step = step if step is not None else delta / 16.0
    _check_args(delta, cap, step)
    _, v = _grid_values(g, cap, step)
    k_max = int(math.floor(delta / step + 1e-12))
    best = 0.0
    for k in range(1, k_max + 1):
        best = max(best, float(np.max(np.abs(v[k:] - v[:-k]))))
    return ModulusEstimate(delta, best, cap, step)


def second_modulus(
    g: Callable[[float], float],
    delta: float,
    cap: float = DEFAULT_CAP,
    step: float | None = None,
) -> ModulusEstimate:
    """Second-difference modulus sup |g(x+2s) - 2 g(x+s) + g(x)|, 0 < s <= delta."""
    step = step if step is not None else delta / 16.0
    _check_args(delta, cap, step)
    _, v = _grid_values(g, cap, step)
    k_max = int(math.floor(delta / step + 1e-12))
    best = 0.0
    for k in range(1, k_max + 1):
        if 2 * k >= v.size:
            break
        second = v[2 * k:] - 2.0 * v[k:-k] + v[: -2 * k]
        best = max(best, float(np.max(np.abs(second))))
    return ModulusEstimate(delta, best, cap, step)


def weighted_modulus(
    g: Callable[[float], float],
    delta: float,
    cap: float = DEFAULT_CAP,
    step: float | None = None,
) -> ModulusEstimate:
    """Weighted modulus sup |g(x+h) - g(x)| / ((1+h^2)(1+x^2)), |h| <= delta.

    Each grid pair (x, x+h) with h > 0 also realizes the step (x+h, -h),
    so every offset is scored against both base points, covering negative
    h without extra evaluations.
    """
    step = step if step is not None else delta / 16.0
    _check_args(delta, cap, step)
    xs, v = _grid_values(g, cap, step)
    k_max = int(math.floor(delta / step + 1e-12))
    best = 0.0
    for k in range(1, k_max + 1):
        h = k * step
        diff = np.abs(v[k:] - v[:-k]) / (1.0 + h * h)
        fwd = diff / (1.0 + xs[:-k] ** 2)   # base x, offset +h
        bwd = diff / (1.0 + xs[k:] ** 2)    # base x+h, offset -h
        best = max(best, float(np.max(fwd)), float(np.max(bwd)))
    return ModulusEstimate(delta, best, cap, step)
