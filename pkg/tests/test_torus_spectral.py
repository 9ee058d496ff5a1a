import math
from itertools import product

import numpy as np
import pytest

import oracles
from spectrace import DomainError, NonConvergenceError
from spectrace import torus_spectral as ts
from spectrace.lattice import lattice_sum_closed, lattice_sum_direct, shell_coords


class TestEigenRule:
    def test_circle_example(self):
        assert ts.eigenrule_eval(ts.EigenRule(ts.INV_LAPLACE_S1, 1), 3) == -1 / 9

    def test_p_first_power_at_diagonal(self):
        assert ts.eigenrule_eval(ts.EigenRule(ts.P_POWER_T2, 1), (1, 1)) == -1j

    @pytest.mark.parametrize("kind", [ts.INV_LAPLACE_T2, ts.P_POWER_T2])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_zero_mode(self, kind, n):
        assert ts.EigenRule(kind, n).eval((0, 0)) == 0
        assert ts.EigenRule(ts.INV_LAPLACE_S1, n).eval(0) == 0

    def test_torus_inverse_laplacian(self):
        rule = ts.EigenRule(ts.INV_LAPLACE_T2, 3)
        assert rule.eval((1, 2)) == -1 / 125
        assert ts.EigenRule(ts.INV_LAPLACE_T2, 2).eval((2, -2)) == 1 / 64

    @pytest.mark.parametrize("n", range(1, 9))
    def test_p_power_formula(self, n):
        rule = ts.EigenRule(ts.P_POWER_T2, n)
        for k, m in [(1, 0), (2, 3), (-4, 1), (5, 5), (7, -2)]:
            want = (-1j) ** n * ((k + m) / (k * k + m * m)) ** n
            assert rule.eval((k, m)) == pytest.approx(want, rel=1e-15, abs=1e-300)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_vectorised_matches_exact(self, n):
        k, m = shell_coords(7)
        for kind in (ts.INV_LAPLACE_T2, ts.P_POWER_T2):
            rule = ts.EigenRule(kind, n)
            fast = rule.values(k, m)
            exact = np.array([rule.eval((a, b)) for a, b in zip(k, m)])
            assert np.allclose(fast, exact, rtol=1e-14, atol=0)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_conjugate_symmetry(self, n):
        rule = ts.EigenRule(ts.P_POWER_T2, n)
        for k, m in product(range(-6, 7), repeat=2):
            assert rule.eval((-k, -m)) == (-1) ** n * rule.eval((k, m))

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            ts.EigenRule(ts.INV_LAPLACE_S1, 1).eval((1, 2))
        with pytest.raises(DomainError):
            ts.EigenRule(ts.P_POWER_T2, 1).eval(3)

    def test_rejects_bad_rule(self):
        with pytest.raises(DomainError):
            ts.EigenRule("heat", 1)
        with pytest.raises(DomainError):
            ts.EigenRule(ts.P_POWER_T2, 0)


class TestCircle:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_closed_form(self, n):
        res = ts.trace_inv_laplacian_s1(n, 1e-10)
        assert res.status == ts.TRACE_CLASS
        want = 2 * (-1) ** n * oracles.ZETA[2 * n]
        assert abs(res.value.real - want) <= res.error_bound + 4e-16
        assert res.checks["agrees"]

    def test_examples(self):
        assert ts.trace_inv_laplacian_s1(1).value.real == pytest.approx(-3.2898681337, abs=1e-10)
        assert ts.trace_inv_laplacian_s1(2).value.real == pytest.approx(2.1646464674, abs=1e-10)

    def test_sign_alternation(self):
        vals = [ts.trace_inv_laplacian_s1(n).value.real for n in range(1, 7)]
        assert all(a * b < 0 for a, b in zip(vals, vals[1:]))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_direct_sum(self, n):
        out = ts.direct_trace_s1(n, 10_000)
        ref, bound = oracles.circle_direct(n, 10_000)
        assert out.value.real == pytest.approx(ref, abs=1e-14)
        assert out.tail_bound == pytest.approx(bound, rel=1e-12)
        assert abs(out.value.real - 2 * (-1) ** n * oracles.ZETA[2 * n]) <= out.tail_bound + 1e-15


class TestTorusInverseLaplacian:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_closed_form(self, n):
        res = ts.trace_inv_laplacian_t2(n, 1e-10)
        assert res.status == ts.TRACE_CLASS
        assert abs(res.value.real - (-1) ** n * oracles.LATTICE[n]) <= res.error_bound + 1e-15
        assert res.checks["agrees"]

    def test_examples(self):
        assert ts.trace_inv_laplacian_t2(2).value.real == pytest.approx(6.0268120396, abs=1e-10)
        assert ts.trace_inv_laplacian_t2(3).value.real == pytest.approx(-4.6589136156, abs=1e-10)

    @pytest.mark.parametrize("n", [2, 3])
    def test_consistent_with_direct_sum(self, n):
        res = ts.trace_inv_laplacian_t2(n, 1e-10)
        direct = lattice_sum_direct(n, 1000)
        assert abs(res.value.real - (-1) ** n * direct.value.real) <= direct.tail_bound

    def test_first_power_diverges(self):
        res = ts.trace_inv_laplacian_t2(1)
        assert res.status == ts.NOT_TRACE_CLASS
        cert = res.certificate
        assert cert.valid and cert.fit == "log"
        assert cert.radii == (100, 1000, 10000)
        # S(R) ~ 2 pi ln R
        assert cert.slope == pytest.approx(2 * math.pi, rel=0.01)
        brute = oracles.square_grid_sum(lambda k, m: 1.0 / (k * k + m * m), 100)
        assert cert.partial_sums[0] == pytest.approx(brute, rel=1e-13)


class TestPPowers:
    def test_fourth_power_equals_split_form_on_same_square(self):
        direct = ts.p_power_direct(4, 2000)
        split = lattice_sum_direct(2, 2000).value.real + 4 * oracles.CROSS_SUM_R2000
        assert direct.value.real == pytest.approx(split, abs=1e-12)
        assert direct.value.imag == 0.0

    def test_fourth_power_against_closed_lattice(self):
        res = ts.trace_p_power_t2(4, 1e-6)
        want = lattice_sum_closed(2).value + 4 * oracles.CROSS_SUM_R2000
        cross_tail = lattice_sum_direct(2, 2000).tail_bound
        assert abs(res.value.real - want) <= res.error_bound + cross_tail
        assert res.status == ts.TRACE_CLASS

    def test_small_radius_brute_force(self):
        for n in (3, 4, 5, 6):
            got = ts.p_power_direct(n, 30).value
            want = sum(
                (-1j) ** n * ((k + m) / (k * k + m * m)) ** n
                for k, m in product(range(-30, 31), repeat=2) if (k, m) != (0, 0)
            )
            assert abs(got - want) <= 1e-13

    @pytest.mark.parametrize("n", [4, 6, 8, 10])
    def test_even_traces_are_real(self, n):
        out = ts.p_power_direct(n, 300)
        assert abs(out.value.imag) <= 1e-12
        sym = np.sum(ts.EigenRule(ts.P_POWER_T2, n).values(*shell_coords(17)))
        assert abs(sym.imag) <= 1e-12

    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_odd_powers_cancel(self, n):
        res = ts.trace_p_power_t2(n, 1e-6)
        assert res.status == ts.TRACE_CLASS and res.extension
        assert res.value == 0
        part = res.checks["symmetric_partial_sum"]
        assert abs(part["re"]) <= 1e-12 and abs(part["im"]) <= 1e-12
        assert math.isfinite(res.checks["abs_sum"])

    def test_tail_bound_dominates(self):
        full = ts.p_power_direct(6, 4000).value.real
        for R in (20, 100, 400):
            out = ts.p_power_direct(6, R)
            assert abs(full - out.value.real) <= out.tail_bound

    def test_tail_bound_needs_power_three(self):
        with pytest.raises(DomainError):
            ts.p_power_tail_bound(2, 10)

    def test_second_power_not_trace_class(self):
        res = ts.trace_p_power_t2(2, target=5)
        assert res.status == ts.NOT_TRACE_CLASS
        assert res.certificate.target == 5 and res.certificate.radius == 63
        assert not res.extension

    def test_first_power_not_trace_class(self):
        res = ts.trace_p_power_t2(1)
        assert res.status == ts.NOT_TRACE_CLASS and res.extension
        cert = res.certificate
        assert cert.fit == "linear" and cert.valid
        brute = oracles.square_grid_sum(lambda k, m: np.abs(k + m) / (k * k + m * m), 100)
        assert cert.partial_sums[0] == pytest.approx(brute, rel=1e-13)
        assert all(s >= r for s, r in zip(cert.partial_sums, cert.radii))

    def test_unreachable_tolerance_raises(self):
        with pytest.raises(NonConvergenceError):
            ts.trace_p_power_t2(4, 1e-10)


class TestCertificate:
    def test_first_block(self):
        want = 16 / 64 + 2 * 25 / 169 + 36 / 324
        assert ts.block_sum(1) == pytest.approx(want, rel=1e-15)

    def test_block_matches_brute_force(self):
        for j in range(1, 6):
            pts = range(2 ** j, 2 ** (j + 1))
            want = math.fsum((k + m) ** 2 / (k * k + m * m) ** 2 for k in pts for m in pts)
            assert ts.block_sum(j) == pytest.approx(want, rel=1e-14)

    def test_blocks_approach_the_square_integral(self):
        # the summand is homogeneous of degree -2, so block j is a Riemann sum
        # of (x+y)^2/(x^2+y^2)^2 over [1,2]^2 with step 2^-j; each stays below 1
        h = 1.0 / 4000
        x = 1.0 + h * (np.arange(4000) + 0.5)
        X, Y = np.meshgrid(x, x)
        integral = float(np.sum((X + Y) ** 2 / (X * X + Y * Y) ** 2)) * h * h
        assert ts.block_sum(12) == pytest.approx(integral, abs=5e-4)
        assert all(ts.block_sum(j) < 1 for j in range(1, 11))

    @pytest.mark.parametrize("target", range(1, 11))
    def test_attained(self, target):
        cert = ts.p2_divergence_certificate(target)
        assert cert.radius == 2 ** (target + 1) - 1
        assert cert.attained >= target
        assert cert.valid

    def test_attained_grows_by_at_least_one(self):
        vals = [ts.p2_divergence_certificate(n).attained for n in range(1, 11)]
        assert all(b - a >= 1 for a, b in zip(vals, vals[1:]))

    def test_attained_matches_brute_force(self):
        cert = ts.p2_divergence_certificate(3)
        brute = oracles.square_grid_sum(lambda k, m: (k + m) ** 2 / (k * k + m * m) ** 2, 15)
        assert cert.attained == pytest.approx(brute, rel=1e-14)

    @pytest.mark.parametrize("target", [0, 13, 2.5])
    def test_rejects_out_of_range(self, target):
        with pytest.raises(DomainError):
            ts.p2_divergence_certificate(target)

    def test_classification_demands_valid_certificate(self):
        bad = ts.DivergenceCertificate(3, 15, 2.0, (), 0.0)
        with pytest.raises(ValueError):
            ts.TraceClassification("P", 2, ts.NOT_TRACE_CLASS, certificate=bad)
        with pytest.raises(ValueError):
            ts.TraceClassification("P", 4, ts.TRACE_CLASS, value=1j, error_bound=math.inf)


def test_binomial_bounds_hold():
    out = ts.binomial_bound_violations(100, 10)
    assert out["even_violations"] == 0 and out["odd_violations"] == 0
    assert out["checked"] == 100 * 100 * sum(n + 1 for n in range(2, 11, 2))
