import math

import numpy as np
import pytest

from smoothkit.bestapprox import (
    FavardOperatorDescriptor,
    MinimaxResult,
    NonConvergenceError,
    NormalizationError,
    PeriodicSpline,
    SingularCollocationError,
    bns_ratio,
    normalized_peak,
    sbs_pointwise_check,
    spline_favard,
    trig_minimax,
)
from smoothkit.harness import CorpusCase, gen_corpus
from smoothkit.kernels import favard_constant
from smoothkit.periodic import TrigPolynomial, sup_norm

TWO_PI = 2.0 * math.pi


def _step(n: int):
    return gen_corpus([CorpusCase(kind="step_sign_cos", n=n)])[0]


class TestMinimax:
    def test_pure_harmonic_above_degree(self):
        # best degree n-1 approximation of cos(n x) is zero, error 1
        res = trig_minimax(TrigPolynomial.cosine(4), 3)
        assert res.error == pytest.approx(1.0, abs=1e-6)
        assert sup_norm(res.approximant.handle("p")) < 1e-6

    def test_exact_recovery_inside_space(self):
        rng = np.random.default_rng(11)
        poly = TrigPolynomial(rng.uniform(-1, 1, 4), rng.uniform(-1, 1, 3))
        res = trig_minimax(poly, 5)
        assert res.error <= 1e-10

    def test_bracket_certifies_error(self):
        rng = np.random.default_rng(5)
        poly = TrigPolynomial(rng.uniform(-1, 1, 9), rng.uniform(-1, 1, 8))
        res = trig_minimax(poly, 3)
        assert res.bracket_low <= res.error <= res.bracket_high
        assert res.bracket_high - res.bracket_low <= 1e-6 * res.error
        # the dense residual really does stay within the certified ceiling
        xs = np.linspace(0.0, TWO_PI, 4096, endpoint=False)
        resid = np.abs(poly(xs) - res.approximant(xs))
        assert float(np.max(resid)) <= res.bracket_high * (1 + 1e-9)

    def test_history_brackets_nest(self):
        rng = np.random.default_rng(7)
        poly = TrigPolynomial(rng.uniform(-1, 1, 8), rng.uniform(-1, 1, 7))
        res = trig_minimax(poly, 2)
        highs = [hi for _, hi in res.bracket_history]
        assert all(b <= a + 1e-15 for a, b in zip(highs, highs[1:]))
        assert all(lo <= res.bracket_high + 1e-12 for lo, _ in res.bracket_history)

    def test_equioscillation_at_reference(self):
        rng = np.random.default_rng(3)
        poly = TrigPolynomial(rng.uniform(-1, 1, 7), rng.uniform(-1, 1, 6))
        res = trig_minimax(poly, 2)
        resid = poly(res.reference_points) - res.approximant(res.reference_points)
        assert np.allclose(np.abs(resid), res.error, rtol=1e-6)
        signs = np.sign(resid)
        assert np.all(signs[1:] * signs[:-1] == -1.0)

    def test_step_function_error_one(self):
        res = trig_minimax(_step(3), 2, tol=1e-6)
        assert res.error == pytest.approx(1.0, abs=1e-4)

    def test_iteration_budget_exhaustion(self):
        rng = np.random.default_rng(5)
        poly = TrigPolynomial(rng.uniform(-1, 1, 9), rng.uniform(-1, 1, 8))
        with pytest.raises(NonConvergenceError) as exc:
            trig_minimax(poly, 3, max_iterations=1)
        assert exc.value.iterations == 1
        assert exc.value.low <= exc.value.high

    def test_degree_bound_validation(self):
        with pytest.raises(ValueError):
            trig_minimax(TrigPolynomial.cosine(1), -1)


class TestPeriodicSpline:
    @pytest.mark.parametrize("degree", [0, 1, 2, 3, 4])
    def test_constant_coefficients_reproduce_constant(self, degree):
        sp = PeriodicSpline(degree=degree, knot_count=8, coefficients=np.full(8, 2.5))
        xs = np.linspace(0.0, TWO_PI, 37)
        assert np.allclose(sp(xs), 2.5, atol=1e-12)

    def test_degree_zero_nearest_centre(self):
        sp = PeriodicSpline(degree=0, knot_count=4, coefficients=np.array([1.0, 2.0, 3.0, 4.0]))
        spacing = TWO_PI / 4
        assert sp(0.0) == 1.0
        assert sp(spacing) == 2.0
        assert sp(spacing * 1.4) == 2.0
        assert sp(-0.2) == 1.0

    def test_coefficient_shape_checked(self):
        with pytest.raises(ValueError):
            PeriodicSpline(degree=1, knot_count=4, coefficients=np.zeros(3))

    def test_scalar_and_array_calls_agree(self):
        sp = PeriodicSpline(degree=2, knot_count=6, coefficients=np.arange(6.0))
        xs = np.array([0.3, 1.7, 5.9])
        vec = sp(xs)
        assert vec.shape == (3,)
        for x, v in zip(xs, vec):
            assert sp(float(x)) == pytest.approx(v, abs=1e-14)


class TestSplineFavard:
    def test_interpolates_at_collocation_points(self):
        f = TrigPolynomial.cosine(3) + TrigPolynomial.sine(2).scaled(0.5)
        for n, r in ((4, 2), (4, 3), (8, 4)):
            spline, _ = spline_favard(f, n, r)
            y = np.arange(2 * n) * (TWO_PI / (2 * n))
            fh = f.handle("f")
            assert np.allclose(spline(y), fh(y), atol=1e-10)

    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    def test_residual_obeys_derivative_bound(self, r):
        rng = np.random.default_rng(23 + r)
        poly = TrigPolynomial(rng.uniform(-1, 1, 4), rng.uniform(-1, 1, 3))
        n = 12
        deriv_norm = sup_norm(poly.derivative(r).handle("d"))
        _, residual = spline_favard(poly, n, r)
        assert residual <= favard_constant(r) * n ** (-r) * deriv_norm * (1 + 1e-6)

    @pytest.mark.parametrize("r", [2, 4])
    def test_halving_follows_order(self, r):
        # probe well inside the asymptotic regime: degree at most n/4
        poly = TrigPolynomial(np.array([0.0, 1.0, 0.4]), np.array([0.7, -0.2]))
        _, res_lo = spline_favard(poly, 8, r)
        _, res_hi = spline_favard(poly, 16, r)
        ratio = res_hi / res_lo
        assert 0.8 * 2.0 ** (-r) <= ratio <= 1.2 * 2.0 ** (-r)

    def test_shifted_collocation_is_singular(self):
        f = TrigPolynomial.cosine(2)
        for r in (1, 2, 3, 4):
            with pytest.raises(SingularCollocationError):
                spline_favard(f, 4, r, collocation="shifted")

    def test_argument_validation(self):
        f = TrigPolynomial.cosine(1)
        with pytest.raises(ValueError):
            spline_favard(f, 0, 2)
        with pytest.raises(ValueError):
            spline_favard(f, 4, 2, collocation="sideways")

    def test_descriptor_carries_sharp_factor(self):
        d = FavardOperatorDescriptor.spline(8, 4)
        assert d.n == 8 and d.r == 4
        assert d.kind == "spline-interpolation"
        assert d.favard_factor == favard_constant(4)


class TestPeakNormalization:
    def test_normalized_peak_properties(self):
        rng = np.random.default_rng(31)
        poly = TrigPolynomial(rng.uniform(-1, 1, 5), rng.uniform(-1, 1, 4))
        unit, x0 = normalized_peak(poly)
        assert sup_norm(unit.handle("u")) == pytest.approx(1.0, abs=1e-9)
        assert unit(x0) == pytest.approx(1.0, abs=1e-9)

    def test_zero_polynomial_rejected(self):
        with pytest.raises(NormalizationError):
            normalized_peak(TrigPolynomial.constant(0.0))


class TestSmoothedPeakComparison:
    def test_cosine_attains_equality(self):
        n = 5
        unit, x0 = normalized_peak(TrigPolynomial.cosine(n))
        for t in (0.2, 0.5, 1.1):
            lhs, rhs = sbs_pointwise_check(unit, n, 3, t * TWO_PI / (2 * n))
            assert lhs == pytest.approx(rhs, abs=1e-12)

    @pytest.mark.parametrize("seed", range(8))
    def test_random_polynomials_dominate_cosine(self, seed):
        rng = np.random.default_rng(seed)
        n = 4
        deg = int(rng.integers(1, n + 1))
        poly = TrigPolynomial(rng.uniform(-1, 1, deg + 1), rng.uniform(-1, 1, deg))
        unit, _ = normalized_peak(poly)
        for r in (1, 3, 6):
            t = float(rng.uniform(0.05, 0.95)) * TWO_PI / n
            lhs, rhs = sbs_pointwise_check(unit, n, r, t)
            assert lhs >= rhs - 1e-9

    def test_rejects_bad_width_degree_and_scale(self):
        n = 3
        unit, _ = normalized_peak(TrigPolynomial.cosine(n))
        with pytest.raises(ValueError):
            sbs_pointwise_check(unit, n, 2, TWO_PI / n)
        big, _ = normalized_peak(TrigPolynomial.cosine(n + 1))
        with pytest.raises(ValueError):
            sbs_pointwise_check(big, n, 2, 0.3)
        with pytest.raises(NormalizationError):
            sbs_pointwise_check(TrigPolynomial.cosine(n).scaled(0.5), n, 2, 0.3)


class TestDerivativeBoundPair:
    def test_cosine_saturates(self):
        n, k = 6, 2
        h = 0.7 * math.pi / n
        lhs, rhs = bns_ratio(TrigPolynomial.cosine(n), n, k, h)
        assert lhs == pytest.approx(n ** (2 * k), rel=1e-12)
        assert lhs == pytest.approx(rhs, rel=1e-10)

    @pytest.mark.parametrize("seed", range(6))
    def test_random_polynomials_below(self, seed):
        rng = np.random.default_rng(100 + seed)
        n = 5
        poly = TrigPolynomial(rng.uniform(-1, 1, n + 1), rng.uniform(-1, 1, n))
        for k in (1, 2):
            h = float(rng.uniform(0.1, 0.9)) * min(TWO_PI / n, math.pi / k)
            lhs, rhs = bns_ratio(poly, n, k, h)
            assert lhs <= rhs * (1 + 1e-8)

    def test_width_window_enforced(self):
        with pytest.raises(ValueError):
            bns_ratio(TrigPolynomial.cosine(2), 2, 1, TWO_PI / 2 + 0.1)
        with pytest.raises(ValueError):
            bns_ratio(TrigPolynomial.cosine(2), 2, 4, math.pi / 4)
