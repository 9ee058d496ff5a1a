import math

import numpy as np
import pytest

import oracles
from spectrace import DomainError
from spectrace.special_fn import (
    BoundedValue,
    dirichlet_beta,
    gamma_positive_integer,
    mellin_theta,
    theta3,
    theta3_small_t_bound,
    theta3_squared_minus_one,
    zeta,
)


class TestBoundedValue:
    def test_rejects_negative_bound(self):
        with pytest.raises(ValueError):
            BoundedValue(1.0, -1e-3, 1)

    def test_rejects_infinite_bound(self):
        with pytest.raises(ValueError):
            BoundedValue(1.0, math.inf, 1)

    def test_rejects_zero_terms(self):
        with pytest.raises(ValueError):
            BoundedValue(1.0, 0.0, 0)

    def test_interval(self):
        assert BoundedValue(2.0, 0.5, 3).interval == (1.5, 2.5)


class TestZeta:
    @pytest.mark.parametrize("s", [2, 3, 4, 5, 6, 7, 8])
    @pytest.mark.parametrize("tol", [1e-6, 1e-10, 1e-13])
    def test_error_bound_holds(self, s, tol):
        z = zeta(s, tol)
        assert z.error_bound <= tol
        assert abs(z.value - oracles.ZETA[s]) <= z.error_bound + 4e-16

    def test_examples(self):
        assert zeta(2, 1e-10).value == pytest.approx(1.6449340668, abs=1e-10)
        assert zeta(4, 1e-10).value == pytest.approx(1.0823232337, abs=1e-10)

    def test_non_integer_argument(self):
        z = zeta(2.5, 1e-12)
        # zeta(2.5) from mpmath
        assert z.value == pytest.approx(1.341487257250917, abs=1e-12)

    @pytest.mark.parametrize("s", [1.0, 0.5, -2.0])
    def test_rejects_divergent_argument(self, s):
        with pytest.raises(DomainError):
            zeta(s, 1e-10)

    @pytest.mark.parametrize("tol", [0.0, -1e-8, 1e-14])
    def test_rejects_bad_tolerance(self, tol):
        with pytest.raises(DomainError):
            zeta(2, tol)

    def test_monotone_decreasing(self):
        grid = [1.5, 2, 2.5, 3, 4, 6, 8, 12]
        vals = [zeta(s, 1e-11).value for s in grid]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_term_count_near_minimal(self):
        # the midpoint bracket needs about (2 tol)^(-1/s) terms
        z = zeta(2, 1e-10)
        assert z.terms_used <= 1.1 * (2e-10) ** -0.5


class TestBeta:
    @pytest.mark.parametrize("s", [2, 3, 4, 5, 6, 7, 8])
    @pytest.mark.parametrize("tol", [1e-6, 1e-10, 1e-13])
    def test_error_bound_holds(self, s, tol):
        b = dirichlet_beta(s, tol)
        assert b.error_bound <= tol
        assert abs(b.value - oracles.BETA[s]) <= b.error_bound + 4e-16

    def test_examples(self):
        assert dirichlet_beta(2, 1e-10).value == pytest.approx(0.9159655942, abs=1e-10)
        assert dirichlet_beta(3, 1e-10).value == pytest.approx(0.9689461463, abs=1e-10)
        assert dirichlet_beta(3, 1e-10).value == pytest.approx(math.pi ** 3 / 32, abs=1e-10)
        assert dirichlet_beta(1, 1e-6).value == pytest.approx(math.pi / 4, abs=1e-6)

    @pytest.mark.parametrize("s", [2, 3, 1.5])
    def test_consecutive_partial_sums_bracket_value(self, s):
        b = dirichlet_beta(s, 1e-8)
        m = b.terms_used
        terms = [(-1) ** j * (2 * j + 1) ** -float(s) for j in range(m + 1)]
        s_m = math.fsum(terms[:-1])
        s_m1 = math.fsum(terms)
        assert min(s_m, s_m1) <= b.value <= max(s_m, s_m1)
        assert b.error_bound == pytest.approx(0.5 * abs(s_m1 - s_m), rel=1e-12)

    @pytest.mark.parametrize("s", [0.0, -1.0])
    def test_rejects_nonpositive(self, s):
        with pytest.raises(DomainError):
            dirichlet_beta(s, 1e-8)


class TestGamma:
    @pytest.mark.parametrize("n,expected", [(1, 1.0), (2, 1.0), (4, 6.0), (11, 3628800.0)])
    def test_factorials(self, n, expected):
        assert gamma_positive_integer(n) == expected

    def test_largest_finite(self):
        assert math.isfinite(gamma_positive_integer(171))
        assert gamma_positive_integer(171) == pytest.approx(7.257415615307994e306, rel=1e-15)

    def test_first_overflow(self):
        with pytest.raises(DomainError):
            gamma_positive_integer(172)

    @pytest.mark.parametrize("n", [0, -3, 2.5, True])
    def test_rejects_invalid(self, n):
        with pytest.raises(DomainError):
            gamma_positive_integer(n)


class TestTheta3:
    def test_value_at_one(self):
        th = theta3(1.0, 1e-12)
        assert th.value == pytest.approx(1.7726372048, abs=1e-10)
        assert abs(th.value - oracles.THETA3_AT_1) <= th.error_bound + 4e-16

    def test_large_t(self):
        th = theta3(50.0, 1e-15)
        assert abs(th.value - 1.0) < 1e-20
        t = 12.0
        assert theta3(t).value - 1.0 == pytest.approx(2 * math.exp(-t), rel=1e-12)

    def test_small_t_growth(self):
        th = theta3(0.01, 1e-10)
        assert th.value ** 2 - 1 == pytest.approx(math.pi / 0.01, rel=0.01)

    def test_vectorised_square_matches_reference(self):
        got = theta3_squared_minus_one(np.array([0.01]))[0]
        assert got == pytest.approx(oracles.THETA3_SQ_MINUS_ONE_AT_0_01, rel=1e-14)

    @pytest.mark.parametrize("t", [40.0, 200.0, 700.0])
    def test_vectorised_square_keeps_leading_term(self, t):
        q = math.exp(-t)
        assert theta3_squared_minus_one(np.array([t]))[0] == pytest.approx(4 * q * (1 + q), rel=1e-14)

    def test_decreasing_on_grid(self):
        grid = np.round(np.arange(0.1, 5.0001, 0.1), 10)
        vals = [theta3(float(t)).value for t in grid]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("t", [0.0, -1.0])
    def test_rejects_nonpositive(self, t):
        with pytest.raises(DomainError):
            theta3(t)

    @pytest.mark.parametrize("t", [1e-4, 1e-3, 0.01, 0.1, 0.5, 1.0, 2.0])
    def test_small_t_bound_holds(self, t):
        assert abs(theta3(t).value - math.sqrt(math.pi / t)) <= theta3_small_t_bound(t)


class TestMellin:
    @pytest.mark.parametrize("n", range(2, 9))
    @pytest.mark.parametrize("tol", [1e-8, 1e-10, 1e-13])
    def test_matches_lattice_constant(self, n, tol):
        m = mellin_theta(n, tol)
        assert m.error_bound <= tol
        assert abs(m.value - oracles.LATTICE[n]) <= m.error_bound

    @pytest.mark.parametrize("n", range(2, 9))
    def test_three_way_bound(self, n):
        m = mellin_theta(n, 1e-10)
        z = zeta(n, 1e-12)
        b = dirichlet_beta(n, 1e-12)
        gap = abs(m.value - 4 * z.value * b.value)
        assert gap <= m.error_bound + 4 * (z.error_bound + b.error_bound) + 1e-14

    def test_examples(self):
        assert mellin_theta(2, 1e-8).value == pytest.approx(6.0268120396, abs=2e-8)
        assert mellin_theta(3, 1e-8).value == pytest.approx(4.6589136156, abs=2e-8)

    @pytest.mark.parametrize("n", [1, 0, 2.5])
    def test_rejects_bad_order(self, n):
        with pytest.raises(DomainError):
            mellin_theta(n)
