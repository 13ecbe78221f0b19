"""Exception types shared across the package."""


class DunklDomainError(ValueError):
    """A parameter is outside the mathematically admissible domain."""


class TermBudgetExceeded(RuntimeError):
    """A series reached the term budget before its tail certificate held."""

    def __init__(self, y: float, terms: int, message: str = ""):
        self.y = y
        self.terms = terms
        super().__init__(
            message or f"series at y={y!r} not certified within {terms} terms"
        )


class MomentDiverges(DunklDomainError):
    """The beta-prime moment integral diverges (order too low: n <= m + 1)."""

    def __init__(self, n: int, m: int):
        self.n = n
        self.m = m
        super().__init__(f"moment of degree {m} diverges for operator order n={n}")


class GrowthTooLarge(DunklDomainError):
    """A test function grows too fast for the requested operator order."""

    def __init__(self, n: int, degree: int):
        self.n = n
        self.degree = degree
        super().__init__(
            f"growth degree {degree} needs order n > {degree + 1}, got n={n}"
        )


class QuadratureNoConverge(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class MalformedTable(ValueError):
    """A sampled-function file could not be parsed as a two-column table."""


class NonMonotoneAbscissae(MalformedTable):
    """Sampled-function abscissae are not strictly increasing from 0."""


class ConfigInvalid(ValueError):
    """An experiment configuration failed validation."""
