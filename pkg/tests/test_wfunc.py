import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothkit.differences import omega
from smoothkit.harness import CorpusCase, gen_corpus
from smoothkit.kernels import binom_exact
from smoothkit.periodic import TrigPolynomial, sup_norm
from smoothkit.wfunctional import (
    WParams,
    transform_poly,
    w_kernel_path,
    w_multiplier,
    w_norm,
    w_pointwise,
    w_sharp,
    w_star,
    w_star_profile,
)


def test_wparams_domain():
    WParams(2, 0.5)
    with pytest.raises(ValueError):
        WParams(2, math.pi / 2)
    with pytest.raises(ValueError):
        WParams(1, 0.0)
    with pytest.raises(ValueError):
        WParams(0, 0.1)


def test_multiplier_frozen_value_first_order():
    # k=1: mu(m) = 1 - sinc^2(m h / 2); at m h = pi/2 this is 1 - 8/pi^2
    p = WParams(1, math.pi / 2)
    assert float(w_multiplier(1, p)) == pytest.approx(0.18943053086129783, abs=1e-15)


def test_multiplier_zero_mode_and_range():
    for k in (1, 2, 4):
        p = WParams(k, 0.3)
        assert float(w_multiplier(0, p)) == 0.0
        ms = np.arange(0, 200)
        mu = w_multiplier(ms, p)
        cap = 2.0 ** (2 * k) / binom_exact(2 * k, k)
        assert np.all(mu >= -1e-12)
        assert np.all(mu <= cap + 1e-12)
        # far harmonics are left essentially unchanged
        assert float(w_multiplier(10_000, p)) == pytest.approx(1.0, abs=1e-3)


def test_eigenfunction_norm_is_multiplier():
    for k, h, m in ((1, 0.7, 3), (2, 0.4, 5), (3, 0.3, 2)):
        p = WParams(k, h)
        value = w_norm(TrigPolynomial.cosine(m), p)
        assert value == pytest.approx(float(w_multiplier(m, p)), rel=1e-11)


@pytest.mark.parametrize("seed", range(6))
def test_three_paths_agree_on_polynomials(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 5))
    p = WParams(k, float(rng.uniform(0.1, 0.9)) * math.pi / k)
    poly = TrigPolynomial(rng.uniform(-1, 1, 6), rng.uniform(-1, 1, 5))
    f = poly.handle("f")
    transformed = transform_poly(poly, p)
    for x in np.linspace(0.0, 2 * math.pi, 7):
        a = w_pointwise(f, p, float(x))
        b = w_kernel_path(f, p, float(x))
        c = transformed(float(x))
        assert a == pytest.approx(c, abs=1e-9)
        assert b == pytest.approx(c, abs=1e-9)


def test_step_quadrature_path_matches_kernel_path():
    f = gen_corpus([CorpusCase(kind="step_sign_cos", n=2)])[0]
    p = WParams(1, 0.6)
    for x in (0.0, 0.5, 1.3, 3.0):
        assert w_pointwise(f, p, x) == pytest.approx(w_kernel_path(f, p, x), abs=1e-9)


def test_norm_paths_agree_on_step():
    f = gen_corpus([CorpusCase(kind="step_sign_cos", n=3)])[0]
    p = WParams(1, 0.4)
    auto = w_norm(f, p)
    quad = w_norm(f, p, path="quadrature")
    kern = w_norm(f, p, path="kernel")
    assert auto == pytest.approx(quad, rel=1e-8)
    assert auto == pytest.approx(kern, rel=1e-8)


def test_w_star_contains_endpoint_norm():
    rng = np.random.default_rng(17)
    poly = TrigPolynomial(rng.uniform(-1, 1, 7), rng.uniform(-1, 1, 6))
    f = poly.handle("f")
    for k in (1, 2):
        for d in (0.2, 0.6) :
            delta = d * math.pi / k
            assert w_star(f, k, delta) >= w_norm(f, WParams(k, delta)) - 1e-12


def test_w_star_profile_monotone():
    f = gen_corpus([CorpusCase(kind="random_trig", degree=6, seed=42)])[0]
    deltas = np.linspace(0.1, 0.95, 12) * math.pi / 2
    prof = w_star_profile(f, 2, deltas)
    assert np.all(np.diff(prof) >= -1e-12)


def test_w_sharp_below_w_star():
    f = gen_corpus([CorpusCase(kind="random_trig", degree=5, seed=9)])[0]
    delta = 0.5 * math.pi / 2
    star = w_star(f, 2, delta)
    for x in (0.0, 1.1, 2.9, 5.0):
        assert w_sharp(f, 2, x, delta) <= star * (1 + 1e-9) + 1e-12


def test_w_star_bounded_by_three_norms():
    f = gen_corpus([CorpusCase(kind="step_sign_cos", n=4)])[0]
    norm = sup_norm(f)
    for k in (1, 2):
        delta = 0.8 * math.pi / k
        assert w_star(f, k, delta) <= 3.0 * norm * (1 + 1e-8)


def test_chain_against_modulus():
    f = gen_corpus([CorpusCase(kind="random_trig", degree=4, seed=3)])[0]
    for k in (1, 2):
        delta = 0.6 * math.pi / k
        star = w_star(f, k, delta)
        cap = omega(f, 2 * k, delta) / binom_exact(2 * k, k)
        assert w_norm(f, WParams(k, delta)) <= star * (1 + 1e-8)
        assert star <= cap * (1 + 1e-8)


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1), st.integers(min_value=1, max_value=3))
def test_w_norm_dominated_by_scaled_sup(seed, k):
    rng = np.random.default_rng(seed)
    poly = TrigPolynomial(rng.uniform(-1, 1, 5), rng.uniform(-1, 1, 4))
    f = poly.handle("f")
    h = float(rng.uniform(0.05, 0.95)) * math.pi / k
    cap = 2.0 ** (2 * k) / binom_exact(2 * k, k)
    assert w_norm(f, WParams(k, h)) <= cap * sup_norm(f) * (1 + 1e-9)


def test_w_star_profile_rejects_out_of_range_deltas():
    f = TrigPolynomial.cosine(1).handle("c")
    with pytest.raises(ValueError):
        w_star_profile(f, 2, np.array([math.pi]))
