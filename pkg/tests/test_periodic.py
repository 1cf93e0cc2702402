import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothkit.periodic import (
    DEFAULT_QUADRATURE,
    FunctionHandle,
    GridFunction,
    QuadratureSpec,
    Resolution,
    TrigPolynomial,
    convolve_periodic,
    convolve_step,
    integrate_panels,
    sup_norm,
    sup_norm_arg,
    wrap_angle,
)
from smoothkit.kernels import triangle_kernel


def test_trig_eval_matches_direct_sum():
    rng = np.random.default_rng(3)
    p = TrigPolynomial(rng.normal(size=6), rng.normal(size=5))
    x = np.linspace(0.0, 2 * math.pi, 37)
    direct = np.full(x.size, p.cos_coeffs[0])
    for m in range(1, 6):
        direct = direct + p.cos_coeffs[m] * np.cos(m * x) + p.sin_coeffs[m - 1] * np.sin(m * x)
    assert np.allclose(p(x), direct, atol=1e-14)


def test_trig_degree_and_padding():
    p = TrigPolynomial([1.0, 2.0], [3.0])
    assert p.degree == 1
    q = p.padded(4)
    assert q.degree == 4
    assert np.allclose(q(0.7), p(0.7))


def test_trig_arithmetic_and_derivative():
    p = TrigPolynomial.cosine(3)
    dp = p.derivative()
    x = np.linspace(0, 2 * math.pi, 25)
    assert np.allclose(dp(x), -3.0 * np.sin(3 * x), atol=1e-13)
    s = p + TrigPolynomial.sine(1)
    assert np.allclose(s(x), np.cos(3 * x) + np.sin(x), atol=1e-13)


def test_sup_norm_exact_amplitude():
    # a cos + b sin has sup norm sqrt(a^2 + b^2)
    p = TrigPolynomial(np.array([0.0, 0.5]), np.array([0.5]))
    value = sup_norm(p.handle("p"))
    assert value == pytest.approx(math.sqrt(0.5), rel=0, abs=1e-12)


@pytest.mark.parametrize("m,amp", [(1, 1.0), (4, 0.25), (9, 2.0)])
def test_sup_norm_single_harmonic(m, amp):
    value = sup_norm(TrigPolynomial.cosine(m, amp).handle("c"))
    assert value == pytest.approx(amp, rel=1e-12)


def test_sup_norm_arg_locates_peak():
    p = TrigPolynomial.cosine(2)
    value, arg = sup_norm_arg(p.handle("c2"))
    assert value == pytest.approx(1.0, abs=1e-12)
    assert min(abs(math.remainder(arg - t, 2 * math.pi)) for t in (0.0, math.pi / 2, math.pi)) < 1e-6


def test_sup_norm_step_uses_jump_candidates():
    jumps = tuple(((0.5 + j) * math.pi / 3) % (2 * math.pi) for j in range(6))
    f = FunctionHandle(
        evaluator=lambda x: np.where(np.cos(3 * np.asarray(x)) >= 0, 1.0, -1.0),
        label="step",
        discontinuities=jumps,
        piecewise_constant=True,
    )
    assert sup_norm(f) == pytest.approx(1.0, abs=1e-12)


def test_grid_function_roundtrip_bandlimited():
    rng = np.random.default_rng(11)
    p = TrigPolynomial(rng.normal(size=9), rng.normal(size=8))
    grid = GridFunction.sample(p.handle("p"), 64)
    q = grid.trig_coefficients(8)
    assert np.allclose(q.cos_coeffs, p.cos_coeffs, atol=1e-13)
    assert np.allclose(q.sin_coeffs, p.sin_coeffs, atol=1e-13)


def test_grid_function_rejects_coarse_grid():
    grid = GridFunction(8, np.zeros(8))
    with pytest.raises(ValueError):
        grid.trig_coefficients(4)


@settings(max_examples=40, deadline=None)
@given(st.floats(min_value=-50.0, max_value=50.0, allow_nan=False))
def test_wrap_angle_range(x):
    w = float(wrap_angle(x))
    assert -math.pi <= w < math.pi
    assert abs(math.remainder(w - x, 2 * math.pi)) < 1e-9


def test_integrate_panels_cosine_squared():
    value = integrate_panels(lambda x: np.cos(x) ** 2, np.array([0.0, 2 * math.pi]))
    assert value == pytest.approx(math.pi, rel=1e-12)


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(panel_nodes=1)


def test_resolution_validation():
    with pytest.raises(ValueError):
        Resolution(grid_size=2)
    with pytest.raises(ValueError):
        Resolution(refine_tol=0.0)


def test_convolve_step_matches_quadrature():
    jumps = (0.5, 2.0, 4.0, 5.5)
    levels = np.array([1.0, -0.5, 0.75, -1.25])

    def ev(x):
        x = np.asarray(x, dtype=float) % (2 * math.pi)
        idx = (np.searchsorted(jumps, x, side="right") - 1) % len(levels)
        return levels[idx]

    f = FunctionHandle(evaluator=ev, label="step", discontinuities=jumps, piecewise_constant=True)
    kern = triangle_kernel(0.8)
    xs = np.array([0.1, 1.7, 3.9, 6.0])
    fast = convolve_step(f, kern, xs)
    slow = np.array([convolve_periodic(f, kern, float(x)) for x in xs])
    assert np.allclose(fast, slow, atol=1e-9)


def test_convolve_step_requires_declared_jumps():
    f = TrigPolynomial.cosine(1).handle("c")
    with pytest.raises(ValueError):
        convolve_step(f, triangle_kernel(0.5), np.array([0.0]))
