"""Operator evaluation: discrete, beta-type general, and monomial paths.

Frozen expected values come from a 50-digit direct summation with
mpmath-style quadrature on [0, inf) -- a route sharing no code with the
library (no [0,1] substitution, no log-space assembly).
"""

import math

import numpy as np
import pytest

from dunklops.core import DunklParams, SeriesPolicy, dunkl_exp, dunkl_exp_odd_part
from dunklops.errors import DunklDomainError, GrowthTooLarge, MomentDiverges
from dunklops.operators import (
    IntegralCache,
    OperatorQuery,
    TestFunction,
    szasz_beta_dunkl,
    szasz_beta_dunkl_monomial,
    szasz_dunkl,
)

ONE = TestFunction("one", lambda s: 1.0, 0).validated()
IDENT = TestFunction("s", lambda s: s, 1).validated()
SQUARE = TestFunction("s2", lambda s: s * s, 2).validated()
EXPDEC = TestFunction("exp_decay", lambda s: math.exp(-s), 0).validated()


def q(n, x, nu, **kw):
    return OperatorQuery(n, x, DunklParams(nu), **kw)


class TestQueryValidation:
    def test_order_one_unsupported(self):
        with pytest.raises(DunklDomainError):
            q(1, 1.0, 0.5)

    def test_negative_x(self):
        with pytest.raises(DunklDomainError):
            q(5, -0.1, 0.5)

    def test_negative_nu(self):
        with pytest.raises(DunklDomainError):
            q(5, 1.0, -0.25)


class TestSzaszDunkl:
    def test_constant(self):
        for nu in (0.0, 0.5, 2.5):
            assert szasz_dunkl(q(7, 1.3, nu), ONE) == pytest.approx(1.0, abs=1e-12)

    def test_classical_reproduces_identity(self):
        assert szasz_dunkl(q(10, 2.0, 0.0), IDENT) == pytest.approx(2.0, rel=1e-13)

    def test_reproduces_identity_all_nu(self):
        # the node shift (r + 2 nu theta(r))/n makes S*(s; x) = x exactly
        for nu in (0.25, 1.0, 2.5):
            assert szasz_dunkl(q(10, 1.0, nu), IDENT) == pytest.approx(1.0, rel=1e-12)

    def test_frozen_square(self):
        got = szasz_dunkl(q(10, 1.0, 1.0), SQUARE)
        assert got == pytest.approx(1.1105263153327083386, rel=1e-12)

    def test_against_direct_summation(self):
        # plain 400-term reference sum, no weight normalization shortcuts
        nu, n, x = 0.75, 9, 1.4
        y = n * x
        num = den = 0.0
        term = 1.0
        for r in range(400):
            if r:
                term *= y / (2 * nu * (r % 2) + r)
            num += term * math.exp(-((r + 2 * nu * (r % 2)) / n))
            den += term
        assert szasz_dunkl(q(n, x, nu), EXPDEC) == pytest.approx(
            num / den, rel=1e-12
        )

    def test_at_zero(self):
        assert szasz_dunkl(q(6, 0.0, 1.0), EXPDEC) == 1.0


class TestBetaTypeGeneral:
    def test_normalization(self):
        got = szasz_beta_dunkl(q(6, 1.3, 0.8), ONE)
        assert got == pytest.approx(1.0, abs=1e-10)

    def test_interpolates_at_zero(self):
        assert szasz_beta_dunkl(q(8, 0.0, 0.5), EXPDEC) == 1.0

    def test_identity_nu_zero(self):
        # T_n(s; x) = n x / (n - 2) at nu = 0
        assert szasz_beta_dunkl(q(4, 1.0, 0.0), IDENT) == pytest.approx(
            2.0, rel=1e-10
        )

    @pytest.mark.parametrize(
        "n,x,nu,g,expected",
        [
            (10, 1.0, 0.5, EXPDEC, 0.37130748027640386618),
            (6, 0.3, 2.5, EXPDEC, 0.88187655763593965219),
        ],
    )
    def test_frozen_values(self, n, x, nu, g, expected):
        assert szasz_beta_dunkl(q(n, x, nu), g) == pytest.approx(expected, rel=1e-9)

    def test_frozen_sqrt(self):
        g = TestFunction("sqrt", math.sqrt, 1).validated()
        got = szasz_beta_dunkl(q(9, 2.0, 1.0), g)
        assert got == pytest.approx(1.5083841652500268996, rel=1e-9)

    def test_frozen_kink(self):
        g = TestFunction("abs_dev", lambda s: abs(s - 1.0), 1).validated()
        got = szasz_beta_dunkl(q(7, 1.5, 0.25), g)
        assert got == pytest.approx(1.1740468212333270223, rel=1e-9)

    def test_frozen_saturating(self):
        g = TestFunction("saturating", lambda s: s * s / (1 + s * s), 0).validated()
        got = szasz_beta_dunkl(q(20, 2.0, 1.0), g)
        assert got == pytest.approx(0.78935131986006155391, rel=1e-9)

    def test_growth_guard(self):
        quartic = TestFunction("s4", lambda s: s**4, 4).validated()
        with pytest.raises(GrowthTooLarge):
            szasz_beta_dunkl(q(5, 1.0, 0.0), quartic)

    def test_order_two_routed_to_closed_forms(self):
        with pytest.raises(DunklDomainError):
            szasz_beta_dunkl(q(2, 1.0, 0.0), ONE)

    def test_positivity_and_monotonicity(self):
        smaller = TestFunction("half_s", lambda s: 0.5 * s, 1).validated()
        for n, x, nu in ((6, 0.5, 0.0), (9, 2.0, 1.0), (12, 5.0, 2.5)):
            tq = q(n, x, nu)
            lo = szasz_beta_dunkl(tq, smaller)
            hi = szasz_beta_dunkl(tq, IDENT)
            assert 0.0 <= lo <= hi

    def test_linearity(self):
        tq = q(9, 1.5, 0.5)
        cache = IntegralCache()
        combo = TestFunction(
            "combo", lambda s: 2.0 * math.exp(-s) + 3.0 * s, 1
        ).validated()
        lhs = szasz_beta_dunkl(tq, combo, cache)
        rhs = 2.0 * szasz_beta_dunkl(tq, EXPDEC, cache) + 3.0 * szasz_beta_dunkl(
            tq, IDENT, cache
        )
        assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_cache_reused_across_x(self):
        cache = IntegralCache()
        szasz_beta_dunkl(q(8, 0.5, 0.5), EXPDEC, cache)
        first = len(cache)
        szasz_beta_dunkl(q(8, 0.4, 0.5), EXPDEC, cache)
        assert len(cache) == first  # smaller y needs no new integrals


class TestMonomialPath:
    def test_normalization_exact(self):
        for nu in (0.0, 0.25, 2.5):
            for n in (6, 20, 80):
                for x in (0.1, 1.0, 10.0):
                    got = szasz_beta_dunkl_monomial(q(n, x, nu), 0)
                    assert got == pytest.approx(1.0, abs=1e-10), (n, x, nu)

    def test_nu_zero_closed_forms(self):
        tq = q(5, 1.0, 0.0)
        assert szasz_beta_dunkl_monomial(tq, 1) == pytest.approx(5.0 / 3.0, rel=1e-10)
        assert szasz_beta_dunkl_monomial(tq, 2) == pytest.approx(35.0 / 6.0, rel=1e-10)

    @pytest.mark.parametrize(
        "n,x,nu,m,expected",
        [
            (10, 1.0, 1.0, 1, 1.1315789470829427116),
            (10, 1.0, 1.0, 2, 1.8026315789881510412),
            (12, 2.0, 0.5, 3, 22.887767532926651645),
            (12, 2.0, 0.5, 4, 95.933588408682725861),
            (8, 0.5, 2.5, 2, 0.36130182176042694296),
        ],
    )
    def test_frozen_values(self, n, x, nu, m, expected):
        assert szasz_beta_dunkl_monomial(q(n, x, nu), m) == pytest.approx(
            expected, rel=1e-12
        )

    def test_first_moment_odd_part_identity(self):
        # T_n(s; x) = (n x - 2 nu * odd(nx)/e_nu(nx)) / (n - 2)
        for n, x, nu in ((7, 0.8, 0.5), (10, 2.5, 2.5), (40, 0.2, 1.0)):
            p = DunklParams(nu)
            y = n * x
            expected = (y - 2 * nu * dunkl_exp_odd_part(y, p) / dunkl_exp(y, p)) / (
                n - 2
            )
            got = szasz_beta_dunkl_monomial(q(n, x, nu), 1)
            assert got == pytest.approx(expected, rel=1e-12)

    def test_at_zero(self):
        tq = q(9, 0.0, 1.0)
        assert szasz_beta_dunkl_monomial(tq, 0) == 1.0
        for m in (1, 2, 3, 4):
            assert szasz_beta_dunkl_monomial(tq, m) == 0.0

    def test_divergence_guard(self):
        with pytest.raises(MomentDiverges):
            szasz_beta_dunkl_monomial(q(3, 1.0, 0.0), 2)
        with pytest.raises(MomentDiverges):
            szasz_beta_dunkl_monomial(q(5, 1.0, 0.0), 4)

    def test_degree_validation(self):
        with pytest.raises(DunklDomainError):
            szasz_beta_dunkl_monomial(q(8, 1.0, 0.0), -1)

    @pytest.mark.parametrize("nu", [0.0, 0.5, 2.0])
    @pytest.mark.parametrize("n", [6, 12, 40])
    def test_agrees_with_quadrature_path(self, nu, n):
        monos = [ONE, IDENT, SQUARE,
                 TestFunction("s3", lambda s: s**3, 3).validated(),
                 TestFunction("s4", lambda s: s**4, 4).validated()]
        cache = IntegralCache()
        for x in (0.1, 1.0, 5.0):
            tq = q(n, x, nu)
            for m, g in enumerate(monos):
                fast = szasz_beta_dunkl_monomial(tq, m)
                slow = szasz_beta_dunkl(tq, g, cache)
                assert slow == pytest.approx(fast, rel=1e-8), (n, x, nu, m)

    def test_large_argument_stability(self):
        # y = 8000 forces the long-series branch with the raised term budget
        pol = SeriesPolicy(max_terms=12_000)
        got = szasz_beta_dunkl_monomial(
            OperatorQuery(8, 1000.0, DunklParams(0.0), pol), 1
        )
        assert got == pytest.approx(8000.0 / 6.0, rel=1e-12)
