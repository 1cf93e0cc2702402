"""Core machinery for 2*pi-periodic functions.

Everything downstream works with one of two representations: an exact
trigonometric polynomial (coefficient arrays) or an opaque evaluator wrapped
in a :class:`FunctionHandle`.  This module supplies both, together with the
shared sup-norm estimator (dense grid plus local parabolic refinement) and a
panel Gauss quadrature for periodic convolutions against compactly supported
kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

TWO_PI = 2.0 * math.pi


class EvaluationError(RuntimeError):
    """An evaluator returned a non-finite value."""

    def __init__(self, where: float, value: float):
        super().__init__(f"non-finite value {value!r} near x = {where!r}")
        self.where = where
        self.value = value


class QuadratureError(RuntimeError):
    """Panel doubling stalled before reaching the requested accuracy."""

    def __init__(self, achieved: float, estimate: float):
        super().__init__(
            "quadrature did not converge: last panel-doubling change "
            f"{achieved:.3e}, estimate {estimate!r}"
        )
        self.achieved = achieved
        self.estimate = estimate


def wrap_angle(x):
    """Reduce angles to the fundamental window [-pi, pi)."""
    return (np.asarray(x, dtype=float) + math.pi) % TWO_PI - math.pi


@dataclass(frozen=True)
class Resolution:
    """Grid/refinement knobs shared by the sup-type estimators.

    grid_size is a floor: bandlimited inputs enlarge the grid to
    32 * (effective degree) so no oscillation falls between samples.
    """

    grid_size: int = 1024
    refine_tol: float = 1e-10
    max_refine_iters: int = 50

    def __post_init__(self):
        if self.grid_size < 4:
            raise ValueError("grid_size must be at least 4")
        if self.refine_tol <= 0:
            raise ValueError("refine_tol must be positive")
        if self.max_refine_iters < 1:
            raise ValueError("max_refine_iters must be at least 1")


DEFAULT_RESOLUTION = Resolution()


@dataclass(frozen=True)
class TrigPolynomial:
    """Real trigonometric polynomial a_0 + sum_m a_m cos(mx) + b_m sin(mx).

    cos_coeffs holds a_0..a_n, sin_coeffs holds b_1..b_n.  Instances are
    immutable; arithmetic returns new objects.
    """

    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.cos_coeffs, dtype=float))
        b = np.atleast_1d(np.asarray(self.sin_coeffs, dtype=float)) if np.size(self.sin_coeffs) else np.zeros(0)
        if a.ndim != 1 or b.ndim != 1:
            raise ValueError("coefficient arrays must be one-dimensional")
        n = max(a.size - 1, b.size)
        a = np.concatenate([a, np.zeros(n + 1 - a.size)])
        b = np.concatenate([b, np.zeros(n - b.size)])
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("coefficients must be finite")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "cos_coeffs", a)
        object.__setattr__(self, "sin_coeffs", b)

    @property
    def degree(self) -> int:
        return self.cos_coeffs.size - 1

    @classmethod
    def constant(cls, value: float) -> "TrigPolynomial":
        return cls(np.array([float(value)]), np.zeros(0))

    @classmethod
    def cosine(cls, m: int, amplitude: float = 1.0) -> "TrigPolynomial":
        if m < 0:
            raise ValueError("harmonic index must be non-negative")
        a = np.zeros(m + 1)
        a[m] = amplitude
        return cls(a, np.zeros(m))

    @classmethod
    def sine(cls, m: int, amplitude: float = 1.0) -> "TrigPolynomial":
        if m < 1:
            raise ValueError("harmonic index must be positive")
        b = np.zeros(m)
        b[m - 1] = amplitude
        return cls(np.zeros(m + 1), b)

    @classmethod
    def harmonic(cls, m: int, amplitude: float = 1.0, phase: float = 0.0) -> "TrigPolynomial":
        """amplitude * cos(m x + phase) as a coefficient pair."""
        a = np.zeros(m + 1)
        b = np.zeros(m)
        a[m] = amplitude * math.cos(phase)
        if m >= 1:
            b[m - 1] = -amplitude * math.sin(phase)
        return cls(a, b)

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        scalar = x_arr.ndim == 0
        flat = np.atleast_1d(x_arr).ravel()
        n = self.degree
        out = np.full(flat.shape, self.cos_coeffs[0])
        if n >= 1:
            m = np.arange(1, n + 1)
            ang = flat[:, None] * m[None, :]
            out = out + np.cos(ang) @ self.cos_coeffs[1:] + np.sin(ang) @ self.sin_coeffs
        out = out.reshape(x_arr.shape) if not scalar else out[0]
        return float(out) if scalar else out

    def derivative(self, order: int = 1) -> "TrigPolynomial":
        """order-fold derivative, computed one exact coefficient rotation at a time."""
        if order < 0:
            raise ValueError("derivative order must be non-negative")
        a = self.cos_coeffs.copy()
        b = np.concatenate([[0.0], self.sin_coeffs])
        m = np.arange(a.size, dtype=float)
        for _ in range(order):
            a, b = m * b, -m * a
        return TrigPolynomial(np.concatenate([[a[0] if order == 0 else 0.0], a[1:]]), b[1:])

    def scaled(self, factor: float) -> "TrigPolynomial":
        return TrigPolynomial(self.cos_coeffs * factor, self.sin_coeffs * factor)

    def padded(self, degree: int) -> "TrigPolynomial":
        if degree < self.degree:
            raise ValueError("cannot pad to a lower degree")
        a = np.concatenate([self.cos_coeffs, np.zeros(degree - self.degree)])
        b = np.concatenate([self.sin_coeffs, np.zeros(degree - self.degree)])
        return TrigPolynomial(a, b)

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        n = max(self.degree, other.degree)
        p, q = self.padded(n), other.padded(n)
        return TrigPolynomial(p.cos_coeffs + q.cos_coeffs, p.sin_coeffs + q.sin_coeffs)

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        return self + other.scaled(-1.0)

    def __neg__(self) -> "TrigPolynomial":
        return self.scaled(-1.0)

    def handle(self, label: str | None = None, **meta) -> "FunctionHandle":
        return FunctionHandle(
            evaluator=self.__call__,
            label=label or f"trig(degree={self.degree})",
            degree_hint=self.degree,
            trig=self,
            meta=meta or None,
        )


@dataclass(frozen=True)
class FunctionHandle:
    """A bounded 2*pi-periodic function given by a vectorised evaluator.

    Optional structure hints let downstream code pick exact fast paths:
    `trig` for bandlimited inputs, `piecewise_constant` + `discontinuities`
    for step functions.  Evaluators must accept ndarray input and be total;
    continuity is not assumed anywhere.
    """

    evaluator: Callable = field(compare=False)
    label: str = "f"
    degree_hint: int | None = None
    discontinuities: tuple[float, ...] | None = None
    piecewise_constant: bool = False
    trig: TrigPolynomial | None = field(default=None, compare=False)
    meta: dict | None = field(default=None, compare=False)

    def __call__(self, x):
        return self.evaluator(x)

    @classmethod
    def constant(cls, value: float, label: str | None = None) -> "FunctionHandle":
        v = float(value)
        return cls(
            evaluator=lambda x: np.full(np.shape(np.asarray(x)), v) if np.ndim(x) else v,
            label=label or f"const({v})",
            degree_hint=0,
            trig=TrigPolynomial.constant(v),
        )

    @classmethod
    def from_scalar(cls, fn: Callable[[float], float], label: str = "f", **kwargs) -> "FunctionHandle":
        vec = np.vectorize(fn, otypes=[float])
        return cls(evaluator=lambda x: vec(x), label=label, **kwargs)


@dataclass(frozen=True)
class GridFunction:
    """Samples of a periodic function on the uniform grid x_m = 2*pi*m/size."""

    size: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if self.size < 4 or vals.shape != (self.size,):
            raise ValueError("need at least 4 samples matching the declared size")
        if not np.all(np.isfinite(vals)):
            raise ValueError("grid values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def sample(cls, f: FunctionHandle, size: int) -> "GridFunction":
        x = np.arange(size) * (TWO_PI / size)
        return cls(size, np.asarray(f(x), dtype=float))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def trig_coefficients(self, max_degree: int) -> TrigPolynomial:
        """Discrete Fourier coefficients; exact for bandlimited data with size > 2*degree."""
        if max_degree >= self.size // 2:
            raise ValueError("grid too coarse for the requested degree")
        spec = np.fft.rfft(self.values)
        a = np.zeros(max_degree + 1)
        b = np.zeros(max_degree)
        a[0] = spec[0].real / self.size
        a[1:] = 2.0 * spec[1 : max_degree + 1].real / self.size
        b[:] = -2.0 * spec[1 : max_degree + 1].imag / self.size
        return TrigPolynomial(a, b)


def _effective_grid(f: FunctionHandle, res: Resolution) -> np.ndarray:
    deg = f.degree_hint or 0
    m = max(res.grid_size, 32 * deg)
    return np.arange(m) * (TWO_PI / m)


def _jump_candidates(f: FunctionHandle) -> np.ndarray:
    if not f.discontinuities:
        return np.zeros(0)
    d = np.asarray(f.discontinuities, dtype=float)
    eps = np.array([-1e-6, -1e-9, 1e-9, 1e-6])
    return (d[:, None] + eps[None, :]).ravel()


def _refine_peak(g: Callable[[float], float], x0: float, v0: float, step: float, res: Resolution) -> tuple[float, float]:
    """Three-point parabolic ascent of g around x0; never returns less than v0."""
    best_x, best_v, d = x0, v0, step
    for _ in range(res.max_refine_iters):
        vm, vp = g(best_x - d), g(best_x + d)
        denom = vm - 2.0 * best_v + vp
        if vm > best_v or vp > best_v:
            if vm > best_v:
                best_x, best_v = best_x - d, vm
            if vp > best_v:
                best_x, best_v = best_x + d, vp
            continue
        if denom >= -1e-300:
            break
        shift = 0.5 * d * (vm - vp) / denom
        shift = min(max(shift, -d), d)
        cand_x = best_x + shift
        cand_v = g(cand_x)
        improved = cand_v - best_v
        if cand_v > best_v:
            best_x, best_v = cand_x, cand_v
        d *= 0.5
        if improved < res.refine_tol:
            break
    return best_x, best_v


def sup_norm_arg(f: FunctionHandle, res: Resolution = DEFAULT_RESOLUTION) -> tuple[float, float]:
    """Sup norm of |f| together with a maximiser.

    Dense grid first (enlarged for declared jump locations), then parabolic
    refinement of the leading local maxima.  The result is a certified lower
    bound of the true sup that converges to it for piecewise-smooth inputs.
    """
    x = _effective_grid(f, res)
    vals = np.abs(np.asarray(f(x), dtype=float))
    if not np.all(np.isfinite(vals)):
        bad = int(np.argmax(~np.isfinite(vals)))
        raise EvaluationError(float(x[bad]), float(vals[bad]))
    m = x.size
    step = TWO_PI / m

    extra = _jump_candidates(f)
    best_x, best_v = float(x[int(np.argmax(vals))]), float(np.max(vals))
    if extra.size:
        ev = np.abs(np.asarray(f(extra), dtype=float))
        if not np.all(np.isfinite(ev)):
            bad = int(np.argmax(~np.isfinite(ev)))
            raise EvaluationError(float(extra[bad]), float(ev[bad]))
        j = int(np.argmax(ev))
        if ev[j] > best_v:
            best_x, best_v = float(extra[j]), float(ev[j])

    is_peak = (vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1))
    peak_idx = np.nonzero(is_peak)[0]
    if peak_idx.size:
        order = np.argsort(vals[peak_idx])[::-1][:8]
        g = lambda t: abs(float(f(np.asarray([t]))[0]))
        for i in peak_idx[order]:
            rx, rv = _refine_peak(g, float(x[i]), float(vals[i]), step, res)
            if rv > best_v:
                best_x, best_v = rx, rv
    return best_v, best_x % TWO_PI


def sup_norm(f: FunctionHandle, res: Resolution = DEFAULT_RESOLUTION) -> float:
    return sup_norm_arg(f, res)[0]


@dataclass(frozen=True)
class QuadratureSpec:
    """Fixed-order Gauss panels with uniform doubling until stable."""

    panel_nodes: int = 16
    tol: float = 1e-11
    max_doublings: int = 10

    def __post_init__(self):
        if self.panel_nodes < 2 or self.tol <= 0 or self.max_doublings < 1:
            raise ValueError("invalid quadrature specification")


DEFAULT_QUADRATURE = QuadratureSpec()

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def integrate_panels(fn: Callable[[np.ndarray], np.ndarray], edges: np.ndarray, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Integrate fn over [edges[0], edges[-1]] with Gauss panels anchored at edges.

    Each panel is subdivided uniformly, doubling the count until two successive
    estimates agree to quad.tol; raises QuadratureError if doubling stalls.
    """
    edges = np.unique(np.asarray(edges, dtype=float))
    if edges.size < 2:
        return 0.0
    nodes, weights = _gauss_rule(quad.panel_nodes)
    prev = None
    pieces = 1
    for _ in range(quad.max_doublings + 1):
        bounds = np.concatenate(
            [np.linspace(edges[i], edges[i + 1], pieces + 1)[:-1] for i in range(edges.size - 1)]
            + [edges[-1:]]
        )
        lo, hi = bounds[:-1], bounds[1:]
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        pts = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        w = (half[:, None] * weights[None, :]).ravel()
        total = float(np.dot(np.asarray(fn(pts), dtype=float), w))
        if prev is not None and abs(total - prev) < quad.tol:
            return total
        prev = total
        pieces *= 2
    raise QuadratureError(abs(total - prev) if prev is not None else math.inf, total)


def convolve_periodic(f: FunctionHandle, g, x: float, quad: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """(f * g)(x) = integral of f(x - t) g(t) dt over the kernel support.

    g is any compactly supported kernel exposing `support_radius`,
    `breakpoints` and vectorised evaluation.  Panels are anchored at the
    kernel breakpoints and additionally split where f(x - t) crosses a
    declared discontinuity of f.
    """
    radius = float(g.support_radius)
    if radius >= math.pi:
        raise ValueError("kernel support must fit inside one period")
    edges = [np.asarray(g.breakpoints, dtype=float)]
    if f.discontinuities:
        t0 = wrap_angle(x - np.asarray(f.discontinuities, dtype=float))
        inside = t0[(t0 > -radius) & (t0 < radius)]
        if inside.size:
            edges.append(inside)
    all_edges = np.concatenate(edges)
    all_edges = np.clip(all_edges, -radius, radius)
    fn = lambda t: np.asarray(f(x - t), dtype=float) * np.asarray(g(t), dtype=float)
    return integrate_panels(fn, all_edges, quad)


def convolve_step(f: FunctionHandle, g, x: np.ndarray) -> np.ndarray:
    """Exact (f * g)(x) for piecewise-constant f against a piecewise-polynomial kernel.

    Splits the kernel window at the images of the declared jumps of f and sums
    constant-value slabs against the exact kernel antiderivative.  No
    quadrature error; used as the fast path for step-function corpora.
    """
    if not (f.piecewise_constant and f.discontinuities):
        raise ValueError("convolve_step needs a declared piecewise-constant function")
    radius = float(g.support_radius)
    if radius >= math.pi:
        raise ValueError("kernel support must fit inside one period")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    jumps = np.asarray(f.discontinuities, dtype=float)
    t = wrap_angle(x[:, None] - jumps[None, :])
    t = np.clip(t, -radius, radius)
    t.sort(axis=1)
    edges = np.concatenate(
        [np.full((x.size, 1), -radius), t, np.full((x.size, 1), radius)], axis=1
    )
    mids = 0.5 * (edges[:, 1:] + edges[:, :-1])
    vals = np.asarray(f(x[:, None] - mids), dtype=float)
    cumulative = g.cumulative(edges)
    return np.einsum("ij,ij->i", vals, np.diff(cumulative, axis=1))
