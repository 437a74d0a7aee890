import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial.hermite_e import hermeval

from wiener_radon.affine import bridge_subspace, closest_point
from wiener_radon.cm_space import CmVector, Grid, kernel_vector
from wiener_radon.errors import BadT, DegreeTooLarge, SNotOnGrid, VarianceOrder
from wiener_radon.grt_core import grt_linear
from wiener_radon.hermite_ito import (
    ProductFunctional, chaos_expansion_coeffs, exp_martingale_grt, grt_power_ito, grt_symmetric_ito,
    hermite, shift_of_variance_check,
)
from wiener_radon.suites import indicator, taylor_hermite

G = Grid(16)


class TestHermite:
    def test_low_orders(self):
        assert hermite(0, 3.7, 2.0) == 1.0
        assert hermite(1, 3.7, 2.0) == 3.7
        assert math.isclose(hermite(2, 3.7, 2.0), 3.7 ** 2 - 2.0, rel_tol=1e-15)
        # x^3 - 3 u2 x from the t^3 Taylor coefficient
        assert math.isclose(hermite(3, 1.5, 0.5), 1.5 ** 3 - 3 * 0.5 * 1.5, rel_tol=1e-15)

    def test_unit_variance_is_probabilists(self):
        x = np.linspace(-4, 4, 33)
        for n in range(15):
            np.testing.assert_allclose(hermite(n, x, 1.0), hermeval(x, [0] * n + [1]), rtol=1e-12, atol=1e-9)

    @pytest.mark.parametrize("n", range(13))
    def test_generating_function(self, n):
        rs = np.random.default_rng(n)
        for x, u2 in rs.uniform([-3, 0], [3, 3], size=(20, 2)):
            ref, scale = taylor_hermite(n, x, u2)
            assert abs(hermite(n, x, u2) - ref) <= 1e-10 * scale

    @pytest.mark.parametrize("lam", [-1.0, 0.5, 2.0, 10.0])
    def test_scaling(self, lam):
        for n in range(11):
            x, u2 = 0.7, 1.3
            lhs = hermite(n, lam * x, lam * lam * u2)
            _, scale = taylor_hermite(n, lam * x, lam * lam * u2)
            assert abs(lhs - lam ** n * hermite(n, x, u2)) <= 1e-10 * scale

    def test_array_matches_scalar(self):
        x = np.linspace(-2, 2, 11)
        np.testing.assert_allclose(hermite(7, x, 0.6), [hermite(7, xi, 0.6) for xi in x], rtol=1e-14)

    def test_degree_and_variance_limits(self):
        with pytest.raises(DegreeTooLarge):
            hermite(61, 0.0, 1.0)
        with pytest.raises(ValueError):
            hermite(2, 0.0, -1.0)


class TestShiftOfVariance:
    def test_degenerate(self):
        lhs, rhs = shift_of_variance_check(5, 0.8, 0.0, 1.2)
        assert math.isclose(lhs, hermite(5, 0.8, 1.2), rel_tol=1e-13)
        assert rhs == hermite(5, 0.8, 1.2)

    def test_second_order_full_variance(self):
        lhs, rhs = shift_of_variance_check(2, 0.0, 0.7, 0.7)
        assert rhs == 0.0
        assert abs(lhs) < 1e-14

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10), st.floats(-2, 2), st.floats(0, 2), st.floats(0, 2))
    def test_random(self, n, mean, var_x, extra):
        lhs, rhs = shift_of_variance_check(n, mean, var_x, var_x + extra)
        _, scale = taylor_hermite(n, abs(mean) + 3 * math.sqrt(var_x), var_x + extra)
        assert abs(lhs - rhs) <= 1e-10 * max(scale, 1.0)

    def test_order(self):
        with pytest.raises(VarianceOrder):
            shift_of_variance_check(3, 0.0, 1.0, 0.5)


class TestGrtIto:
    @pytest.mark.parametrize("n", range(8))
    @pytest.mark.parametrize("c", [-1.0, 0.0, 1.5])
    def test_classical_special_case(self, n, c):
        f = CmVector(G, np.ones(16))
        assert grt_power_ito(f, n, 1.0, c) == hermite(n, c, 1.0)
        assert math.isclose(grt_power_ito(f, n, 1.0, c), hermeval(c, [0] * n + [1]), rel_tol=1e-12, abs_tol=1e-12)

    def test_order_zero(self):
        assert grt_power_ito(kernel_vector(0.5, G), 0, 0.5, 3.0) == 1.0

    @pytest.mark.parametrize("T,c", [(0.25, 1.0), (0.5, -2.0), (1.0, 0.3)])
    def test_order_one_is_linear(self, T, c):
        f = CmVector(G, np.linspace(-1, 1, 16))
        law = closest_point(bridge_subspace([T], [c], G))
        assert abs(grt_power_ito(f, 1, T, c) - grt_linear(law, f)) <= 1e-12 * max(1, abs(grt_linear(law, f)))

    def test_bad_T(self):
        with pytest.raises(BadT):
            grt_power_ito(kernel_vector(0.5, G), 2, 0.0, 1.0)
        with pytest.raises(SNotOnGrid):
            grt_power_ito(kernel_vector(0.5, G), 2, 0.3, 1.0)

    def test_symmetric_equal_factors(self):
        f = CmVector(G, np.arange(16.0) / 16)
        for n in range(1, 5):
            assert math.isclose(grt_symmetric_ito(ProductFunctional.power(f, n), 0.75, 0.4),
                                grt_power_ito(f, n, 0.75, 0.4), rel_tol=1e-13)

    @pytest.mark.parametrize("c", [0.0, 0.5, 1.0])
    def test_symmetric_two_factors(self, c):
        P = ProductFunctional((indicator(0, 0.5, G), indicator(0, 1.0, G)))
        assert math.isclose(grt_symmetric_ito(P, 0.5, c), 0.25 * hermite(2, 2 * c, 2.0), rel_tol=1e-14, abs_tol=1e-15)

    def test_symmetric_at_hermite_root(self):
        T = 0.5
        c = T / math.sqrt(T)  # c/T = 1/sqrt(T) is a root of H_2(.; 1/T)
        P = ProductFunctional((indicator(0, 0.25, G), kernel_vector(0.75, G)))
        assert abs(grt_symmetric_ito(P, T, c)) < 1e-14
        assert abs(grt_symmetric_ito(P, T, -c)) < 1e-14

    def test_linear_combination(self):
        f, g = indicator(0, 0.5, G), kernel_vector(0.25, G)
        P1, P2 = ProductFunctional((f, g)), ProductFunctional((g, g))
        combo = grt_symmetric_ito([(2.0, P1), (-0.5, P2)], 0.5, 1.0)
        assert math.isclose(combo, 2 * grt_symmetric_ito(P1, 0.5, 1.0) - 0.5 * grt_symmetric_ito(P2, 0.5, 1.0),
                            rel_tol=1e-14)


class TestChaos:
    def test_zero_vector(self):
        coeffs = chaos_expansion_coeffs(CmVector(G, np.zeros(16)), 5, 0.5, 1.0)
        assert coeffs == [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]

    def test_terms_match_power_ito(self):
        h = CmVector(G, np.linspace(0.2, 1.0, 16))
        coeffs = chaos_expansion_coeffs(h, 12, 0.75, -0.4)
        for n, a in enumerate(coeffs):
            ref = grt_power_ito(h, n, 0.75, -0.4) / math.factorial(n)
            assert math.isclose(a, ref, rel_tol=1e-11, abs_tol=1e-15)

    @pytest.mark.parametrize("T,c", [(0.5, 1.0), (1.0, -2.0), (0.25, 0.5)])
    def test_partial_sum_converges(self, T, c):
        h = kernel_vector(T, G)
        target = exp_martingale_grt(h, T, c)
        assert abs(math.fsum(chaos_expansion_coeffs(h, 40, T, c)) - target) <= 1e-8 * max(1, target)

    def test_truncation_error_decreases(self):
        # The raw partial-sum error dips near Hermite roots, so check the tail majorant instead:
        # it bounds the error and decreases once factorials dominate.
        h = 2.0 * kernel_vector(1.0, G)
        T, c = 1.0, 0.7
        target = exp_martingale_grt(h, T, c)
        coeffs = chaos_expansion_coeffs(h, 60, T, c)
        tails = [math.fsum(abs(a) for a in coeffs[N + 1:]) for N in range(41)]
        errs = [abs(math.fsum(coeffs[: N + 1]) - target) for N in range(41)]
        start = math.ceil(math.e * 4.0)
        assert all(b < a for a, b in zip(tails[start:], tails[start + 1:]))
        assert all(e <= t + 1e-12 * target for e, t in zip(errs, tails))
        assert errs[-1] <= 1e-12 * target

    def test_order_limit(self):
        with pytest.raises(DegreeTooLarge):
            chaos_expansion_coeffs(kernel_vector(0.5, G), 61, 0.5, 1.0)
