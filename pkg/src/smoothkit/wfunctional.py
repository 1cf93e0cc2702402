"""The averaged-difference smoothness functional and its sharp/maximal forms.

W(f, x, h) averages the signed central difference of order 2k against the
unit-mass triangle weight of width h, normalised by the central binomial
coefficient.  Three computation paths are provided and cross-checked by the
test suite: the defining quadrature, the kernel form f - f * Lambda, and the
harmonic multiplier for bandlimited inputs.  The kernel form carries a minus
sign; the multiplier identity mu = 1 - lambda_hat(m) is the arbiter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .differences import _central_weights
from .kernels import PiecewiseLinearKernel, lambda_kernel, lambda_vertices, triangle_kernel
from .periodic import (
    DEFAULT_QUADRATURE,
    DEFAULT_RESOLUTION,
    FunctionHandle,
    QuadratureSpec,
    Resolution,
    TrigPolynomial,
    _gauss_rule,
    convolve_periodic,
    convolve_step,
    integrate_panels,
    sup_norm,
    wrap_angle,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class WParams:
    """Order/width pair (k, h) with the admissible range 0 < h < pi/k."""

    k: int
    h: float

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("order k must be at least 1")
        if not 0.0 < self.h < math.pi / self.k:
            raise ValueError(
                f"width h = {self.h!r} outside the admissible range (0, pi/{self.k})"
            )

    @property
    def norm_factor(self) -> float:
        return 1.0 / math.comb(2 * self.k, self.k)


def w_multiplier(m, p: WParams):
    """Action on the m-th harmonic: 1 + 2 sum_j (-1)^j a_j sinc^2(j m h / 2).

    Exact finite formula; the constant (m = 0) is annihilated.  Values lie in
    [0, 2^{2k} / binom(2k, k)] and tend to 1 as m grows.
    """
    a = lambda_vertices(p.k).a_floats()
    m_arr = np.asarray(m, dtype=float)
    acc = np.ones(m_arr.shape)
    for j in range(1, p.k + 1):
        acc = acc + 2.0 * (-1.0) ** j * a[j - 1] * np.sinc(j * m_arr * p.h / (2.0 * math.pi)) ** 2
    acc = np.where(m_arr == 0.0, 0.0, acc)
    return acc if acc.shape else float(acc)


def transform_poly(poly: TrigPolynomial, p: WParams) -> TrigPolynomial:
    """Coefficientwise image of a trigonometric polynomial under W(., h)."""
    mu = np.asarray(w_multiplier(np.arange(poly.degree + 1), p), dtype=float)
    mu = np.atleast_1d(mu)
    return TrigPolynomial(poly.cos_coeffs * mu, poly.sin_coeffs * mu[1:])


def _induced_splits(f: FunctionHandle, p: WParams, x: float) -> list[float]:
    """Steps t in (0, h) where some shifted copy f(x + j t) crosses a jump."""
    if not f.discontinuities:
        return []
    out = []
    for d in f.discontinuities:
        base = float(wrap_angle(d - x))
        for j in range(-p.k, p.k + 1):
            if j == 0:
                continue
            t = base / j
            if 0.0 < t < p.h:
                out.append(t)
    return out


def w_pointwise(
    f,
    p: WParams,
    x: float,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Defining quadrature: the weighted central difference averaged in t.

    The integrand is even in t, so integration runs over [0, h] with a
    doubled weight; panels split at images of declared jumps of f.
    """
    if isinstance(f, TrigPolynomial):
        f = f.handle("f")
    weights = [float(w) for w in _central_weights(p.k)]
    phi = triangle_kernel(p.h)
    xf = float(x)

    def fn(t: np.ndarray) -> np.ndarray:
        acc = np.zeros(t.shape)
        for j, w in zip(range(-p.k, p.k + 1), weights):
            acc = acc + w * np.asarray(f(xf + j * t), dtype=float)
        return acc * phi(t)

    edges = [0.0, p.h] + _induced_splits(f, p, xf)
    return 2.0 * p.norm_factor * integrate_panels(fn, np.array(edges), quad)


def w_kernel_path(
    f,
    p: WParams,
    x: float,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Kernel form f(x) - (f * Lambda_{k,h})(x)."""
    if isinstance(f, TrigPolynomial):
        f = f.handle("f")
    kern = lambda_kernel(p.k, p.h)
    if f.piecewise_constant and f.discontinuities:
        conv = float(convolve_step(f, kern, np.array([x]))[0])
    else:
        conv = convolve_periodic(f, kern, float(x), quad)
    return float(f(float(x))) - conv


def _generic_values(f: FunctionHandle, p: WParams, xs: np.ndarray, quad: QuadratureSpec) -> np.ndarray:
    """Vectorised defining quadrature for continuous black-box inputs.

    One shared panelisation of [0, h] serves every x; panels double until the
    worst point is stable.
    """
    weights = [float(w) for w in _central_weights(p.k)]
    phi = triangle_kernel(p.h)
    nodes, gw = _gauss_rule(quad.panel_nodes)
    prev = None
    pieces = 2
    for _ in range(quad.max_doublings + 1):
        edges = np.linspace(0.0, p.h, pieces + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[:-1] + edges[1:])
        t = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        wq = (half[:, None] * gw[None, :]).ravel() * phi(t)
        acc = np.zeros((xs.size, t.size))
        for j, w in zip(range(-p.k, p.k + 1), weights):
            acc += w * np.asarray(f(xs[:, None] + j * t[None, :]), dtype=float)
        total = 2.0 * p.norm_factor * (acc @ wq)
        if prev is not None and float(np.max(np.abs(total - prev))) < quad.tol * max(1.0, float(np.max(np.abs(total)))):
            return total
        prev = total
        pieces *= 2
    return total


def _w_handle(f: FunctionHandle, p: WParams, quad: QuadratureSpec) -> FunctionHandle:
    """FunctionHandle for x -> W(f, x, h) on the best available exact path."""
    if f.trig is not None:
        return transform_poly(f.trig, p).handle(f"W[{p.k},{p.h:.6g}]({f.label})")
    if f.piecewise_constant and f.discontinuities:
        kern = lambda_kernel(p.k, p.h)

        def ev_step(x):
            arr = np.atleast_1d(np.asarray(x, dtype=float))
            out = np.asarray(f(arr), dtype=float) - convolve_step(f, kern, arr)
            return out if np.ndim(x) else float(out[0])

        return FunctionHandle(
            evaluator=ev_step,
            label=f"W[{p.k},{p.h:.6g}]({f.label})",
            discontinuities=f.discontinuities,
        )

    def ev(x):
        arr = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
        out = _generic_values(f, p, arr, quad)
        return out.reshape(np.shape(x)) if np.ndim(x) else float(out[0])

    return FunctionHandle(evaluator=ev, label=f"W[{p.k},{p.h:.6g}]({f.label})", degree_hint=f.degree_hint)


def w_norm(
    f,
    p: WParams,
    res: Resolution = DEFAULT_RESOLUTION,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    path: str = "auto",
) -> float:
    """Sup over x of |W(f, x, h)|."""
    if isinstance(f, TrigPolynomial):
        f = f.handle("f")
    if path == "auto":
        return sup_norm(_w_handle(f, p, quad), res)
    if path == "multiplier":
        if f.trig is None:
            raise ValueError("multiplier path needs a trigonometric representation")
        return sup_norm(transform_poly(f.trig, p).handle("W"), res)
    if path == "quadrature":
        return sup_norm(
            FunctionHandle(
                evaluator=np.vectorize(lambda x: w_pointwise(f, p, float(x), quad), otypes=[float]),
                label="Wq",
                degree_hint=f.degree_hint,
                discontinuities=f.discontinuities,
            ),
            res,
        )
    if path == "kernel":
        return sup_norm(
            FunctionHandle(
                evaluator=np.vectorize(lambda x: w_kernel_path(f, p, float(x), quad), otypes=[float]),
                label="Wk",
                degree_hint=f.degree_hint,
                discontinuities=f.discontinuities,
            ),
            res,
        )
    raise ValueError(f"unknown path {path!r}")


def _refine_width(fn, h0: float, v0: float, step: float, lo: float, hi: float, res: Resolution) -> float:
    """Parabolic ascent on the width axis, clamped to [lo, hi]."""
    best_h, best_v = h0, v0
    for _ in range(min(res.max_refine_iters, 16)):
        hl = max(lo, best_h - step)
        hr = min(hi, best_h + step)
        vl = fn(hl) if hl < best_h else best_v
        vr = fn(hr) if hr > best_h else best_v
        denom = vl - 2.0 * best_v + vr
        if denom < 0.0:
            shift = min(step, max(-step, 0.5 * (vl - vr) / denom * step))
            cand = min(hi, max(lo, best_h + shift))
        else:
            cand = hl if vl > vr else hr
        vc = fn(cand) if cand != best_h else best_v
        prev = best_v
        for hh, vv in ((hl, vl), (hr, vr), (cand, vc)):
            if vv > best_v:
                best_h, best_v = hh, vv
        step *= 0.5
        if step < 1e-14 or best_v - prev < res.refine_tol:
            break
    return best_v


def _width_grid(k: int, deltas: np.ndarray, base_points: int) -> np.ndarray:
    dmax = float(np.max(deltas))
    base = np.geomspace(dmax * 1e-4, dmax, base_points)
    return np.unique(np.concatenate([base, deltas]))


def _batch_step_norms(f: FunctionHandle, k: int, widths: np.ndarray, res: Resolution) -> np.ndarray:
    """Dense-grid norms of W(f, ., h) for step inputs, one width per row."""
    size = max(res.grid_size, 1024)
    xs = np.arange(size) * (TWO_PI / size)
    d = np.asarray(f.discontinuities, dtype=float)
    eps = np.array([-1e-6, -1e-9, 1e-9, 1e-6])
    xs = np.concatenate([xs, (d[:, None] + eps[None, :]).ravel()])
    fx = np.asarray(f(xs), dtype=float)
    out = np.empty(widths.size)
    for i, h in enumerate(widths):
        kern = lambda_kernel(k, float(h))
        out[i] = float(np.max(np.abs(fx - convolve_step(f, kern, xs))))
    return out


def _batch_trig_norms(poly: TrigPolynomial, k: int, widths: np.ndarray, res: Resolution) -> np.ndarray:
    """Dense-grid norms of W(poly, ., h) for many widths at once."""
    deg = poly.degree
    m = np.arange(deg + 1)
    a = lambda_vertices(k).a_floats()
    mu = np.ones((widths.size, deg + 1))
    for j in range(1, k + 1):
        mu += 2.0 * (-1.0) ** j * a[j - 1] * np.sinc(np.outer(widths, m) * j / (2.0 * math.pi)) ** 2
    mu[:, 0] = 0.0
    size = max(res.grid_size, 32 * max(deg, 1))
    x = np.linspace(0.0, TWO_PI, size, endpoint=False)
    cos_m = np.cos(np.outer(m, x))
    sin_m = np.sin(np.outer(m, x))
    vals = (mu * poly.cos_coeffs) @ cos_m + (mu[:, 1:] * poly.sin_coeffs) @ sin_m[1:]
    return np.max(np.abs(vals), axis=1)


def w_star_profile(
    f,
    k: int,
    deltas,
    res: Resolution = DEFAULT_RESOLUTION,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    base_points: int = 128,
) -> np.ndarray:
    """Maximal functional sup_{0<h<=delta} W(f, h) at each delta.

    A single log-spaced width grid (joined with the requested deltas) is
    swept once; each delta takes the running max below it, refines the
    winning width, and is floored at the endpoint value W(f, delta) so the
    definitional containment holds exactly.
    """
    if isinstance(f, TrigPolynomial):
        f = f.handle("f")
    deltas = np.asarray(deltas, dtype=float)
    if np.any(deltas <= 0.0) or np.any(deltas >= math.pi / k):
        raise ValueError("every delta must lie in (0, pi/k)")
    grid = _width_grid(k, deltas, base_points)

    cache: dict[float, float] = {}

    def norm_fn(h: float) -> float:
        if h not in cache:
            cache[h] = w_norm(f, WParams(k, h), res, quad)
        return cache[h]

    if f.trig is not None:
        vals = _batch_trig_norms(f.trig, k, grid, res)
    elif f.piecewise_constant and f.discontinuities:
        vals = _batch_step_norms(f, k, grid, res)
    else:
        vals = np.array([norm_fn(h) for h in grid])
    out = np.zeros(deltas.shape)
    order = np.argsort(deltas)
    running = 0.0
    for idx in order:
        d = deltas[idx]
        count = int(np.searchsorted(grid, d * (1.0 + 1e-15), side="right"))
        j = int(np.argmax(vals[:count]))
        h0 = float(grid[j])
        if float(vals[j]) > running * (1.0 - 1e-6) - 1e-12:
            spacing = grid[min(j + 1, grid.size - 1)] - grid[max(j - 1, 0)]
            refined = _refine_width(norm_fn, h0, norm_fn(h0), max(spacing, 1e-12), 1e-14, float(d), res)
            running = max(running, refined)
        running = max(running, norm_fn(float(d)))
        out[idx] = running
    return out


def w_star(
    f,
    k: int,
    delta: float,
    res: Resolution = DEFAULT_RESOLUTION,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    base_points: int = 128,
) -> float:
    """sup over x and widths h <= delta; Lemma-style maximal functional."""
    return float(w_star_profile(f, k, np.array([delta]), res, quad, base_points)[0])


def w_sharp(
    f,
    k: int,
    x: float,
    delta: float,
    res: Resolution = DEFAULT_RESOLUTION,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    base_points: int = 128,
) -> float:
    """Pointwise maximal functional sup_{0<h<=delta} |W(f, x, h)|."""
    if isinstance(f, TrigPolynomial):
        f = f.handle("f")
    if not 0.0 < delta < math.pi / k:
        raise ValueError("delta must lie in (0, pi/k)")
    grid = _width_grid(k, np.array([delta]), base_points)

    if f.trig is not None:
        poly = f.trig
        m = np.arange(poly.degree + 1)
        a = lambda_vertices(k).a_floats()
        mu = np.ones((grid.size, poly.degree + 1))
        for j in range(1, k + 1):
            mu += 2.0 * (-1.0) ** j * a[j - 1] * np.sinc(np.outer(grid, m) * j / (2.0 * math.pi)) ** 2
        mu[:, 0] = 0.0
        cos_m = np.cos(m * x)
        sin_m = np.sin(m * x)
        vals = np.abs((mu * poly.cos_coeffs) @ cos_m + (mu[:, 1:] * poly.sin_coeffs) @ sin_m[1:])

        def point_fn(h: float) -> float:
            return abs(float(transform_poly(poly, WParams(k, h))(x)))

    else:

        def point_fn(h: float) -> float:
            return abs(w_pointwise(f, WParams(k, h), x, quad))

        vals = np.array([point_fn(h) for h in grid])

    j = int(np.argmax(vals))
    spacing = grid[min(j + 1, grid.size - 1)] - grid[max(j - 1, 0)]
    best = _refine_width(point_fn, float(grid[j]), point_fn(float(grid[j])), max(spacing, 1e-12), 1e-14, delta, res)
    return max(best, point_fn(delta))
