"""Beta-prime kernel integrals: closed forms and adaptive quadrature.

The kernel for series index r and operator order n is

    k_{r,n}(s) = s^(r-1) (1+s)^(-n-r+1),  s in [0, inf),

with total mass B(r, n-1).  Monomial moments have the closed form

    integral s^m k_{r,n}(s) ds = B(r+m, n-m-1),   finite iff n > m + 1.

General integrands are handled by substituting s = t/(1-t), which turns
the kernel into the Beta(r, n-1) density t^(r-1) (1-t)^(n-2) on [0, 1);
that density is evaluated in log space so large (r, n) never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy import integrate

from .errors import DunklDomainError, MomentDiverges, QuadratureNoConverge

__all__ = [
    "QuadraturePolicy",
    "KernelSpec",
    "log_beta",
    "kernel_moment_closed",
    "kernel_mean",
    "kernel_integral",
]


@dataclass(frozen=True)
class QuadraturePolicy:
    abs_tol: float = 1e-11
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise DunklDomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DunklDomainError("max_subdivisions must be >= 1")


DEFAULT_QUAD = QuadraturePolicy()


@dataclass(frozen=True)
class KernelSpec:
    """Series index r >= 1 and operator order n >= 2 of one kernel."""

    r: int
    n: int

    def __post_init__(self):
        if self.r < 1:
            raise DunklDomainError(f"kernel index r must be >= 1, got {self.r}")
        if self.n < 2:
            raise DunklDomainError(f"kernel order n must be >= 2, got {self.n}")


def log_beta(a: float, b: float) -> float:
    """ln B(a, b) = lnG(a) + lnG(b) - lnG(a+b) for a, b > 0."""
    if a <= 0 or b <= 0:
        raise DunklDomainError(f"log_beta needs positive arguments, got ({a}, {b})")
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def kernel_moment_closed(spec: KernelSpec, m: int) -> float:
    """ln of the m-th kernel moment, i.e. ln B(r+m, n-m-1).

    Raises MomentDiverges when n <= m + 1 (the second Beta argument hits 0).
    """
    if m < 0:
        raise DunklDomainError(f"moment degree must be >= 0, got {m}")
    if spec.n - m - 1 <= 0:
        raise MomentDiverges(spec.n, m)
    return log_beta(spec.r + m, spec.n - m - 1)


def _quad_breakpoints(r: int, n: int) -> list[float]:
    """Interior breakpoints bracketing the Beta(r, n-1) density peak.

    For large r + n the density is a narrow bump that a coarse first pass of
    the adaptive rule can miss entirely; pinning the mode and a few widths
    around it forces subdivision where the mass is.
    """
    a, b = r, n - 1
    if a + b <= 2:
        return []
    mode = (a - 1) / (a + b - 2)
    sigma = math.sqrt(max(mode * (1 - mode), 1e-12) / (a + b))
    pts = []
    for k in (-8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0):
        t = mode + k * sigma
        if 1e-12 < t < 1 - 1e-12:
            pts.append(t)
    return sorted(set(pts))


def kernel_mean(
    spec: KernelSpec,
    g: Callable[[float], float],
    policy: QuadraturePolicy = DEFAULT_QUAD,
) -> float:
    """Mean of g under the normalized kernel density k_{r,n} / B(r, n-1).

    Returned means stay O(sup |g| near the kernel mass), which is what the
    operator series needs; the unnormalized integral underflows long before
    the mean loses accuracy.
    """
    r, n = spec.r, spec.n
    log_norm = log_beta(r, n - 1)

    def integrand(t: float) -> float:
        if t <= 0.0:
            return 0.0 if r > 1 else math.exp((n - 2) * math.log1p(-t) - log_norm) * g(0.0)
        if t >= 1.0:
            return 0.0
        u = 1.0 - t
        log_density = (r - 1) * math.log(t) + (n - 2) * math.log(u) - log_norm
        if log_density < -745.0:  # exp underflows; the tail is dead anyway
            return 0.0
        return math.exp(log_density) * g(t / u)

    breakpoints = _quad_breakpoints(r, n)
    if len(breakpoints) >= policy.max_subdivisions:
        # QAGP needs one subinterval per breakpoint segment before it can
        # even start subdividing
        raise QuadratureNoConverge(
            f"kernel mean (r={r}, n={n}): subdivision budget "
            f"{policy.max_subdivisions} below the {len(breakpoints)} "
            f"breakpoints pinning the density peak"
        )
    value, abserr, info, *message = integrate.quad(
        integrand,
        0.0,
        1.0,
        points=breakpoints,
        epsabs=policy.abs_tol,
        epsrel=policy.rel_tol,
        limit=policy.max_subdivisions,
        full_output=True,
    )
    if message:
        raise QuadratureNoConverge(
            f"kernel mean (r={r}, n={n}): {message[0].strip()}"
        )
    if abserr > 10.0 * max(policy.abs_tol, policy.rel_tol * abs(value)):
        raise QuadratureNoConverge(
            f"kernel mean (r={r}, n={n}): error estimate {abserr:.3e} "
            f"exceeds requested tolerance"
        )
    return value


def kernel_integral(
    spec: KernelSpec,
    g: Callable[[float], float],
    policy: QuadraturePolicy = DEFAULT_QUAD,
    growth_degree: int = 0,
) -> float:
    """The raw kernel integral of g, i.e. B(r, n-1) * mean(g).

    The caller declares g's polynomial growth degree; the integral only
    exists for n > degree + 1.
    """
    if spec.n <= growth_degree + 1:
        from .errors import GrowthTooLarge

        raise GrowthTooLarge(spec.n, growth_degree)
    return math.exp(log_beta(spec.r, spec.n - 1)) * kernel_mean(spec, g, policy)
