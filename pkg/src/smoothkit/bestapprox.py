"""Best uniform trigonometric approximation and spline interpolation operators.

trig_minimax runs a cyclic single-point exchange over an equioscillating
reference; spline_favard interpolates on a uniform periodic knot grid whose
spacing pi/n realises the classical residual bound with the Favard constant.
Also houses the two inequality primitives used by the verification harness:
the smoothing-kernel pointwise comparison and the derivative/functional
ratio for polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kernels import chi_power, favard_constant
from .periodic import (
    DEFAULT_RESOLUTION,
    FunctionHandle,
    Resolution,
    TrigPolynomial,
    _refine_peak,
    sup_norm,
    sup_norm_arg,
)
from .wfunctional import WParams, w_multiplier, w_norm

TWO_PI = 2.0 * math.pi


class NonConvergenceError(RuntimeError):
    """Exchange iteration exhausted; carries the last certified bracket."""

    def __init__(self, iterations: int, low: float, high: float):
        super().__init__(
            f"minimax exchange did not converge after {iterations} iterations; "
            f"error bracketed in [{low!r}, {high!r}]"
        )
        self.iterations = iterations
        self.low = low
        self.high = high


class SingularCollocationError(RuntimeError):
    """The circulant collocation symbol vanished at some frequency."""


class NormalizationError(ValueError):
    """Input polynomial is not normalized to peak value one."""


@dataclass(frozen=True)
class MinimaxResult:
    """Best-approximation output: polynomial, error, and solver evidence."""

    approximant: TrigPolynomial
    error: float
    reference_points: np.ndarray
    iterations: int
    bracket_low: float
    bracket_high: float
    bracket_history: tuple = field(repr=False, default=())


def _solve_reference(f_vals: np.ndarray, ref: np.ndarray, degree: int) -> tuple[np.ndarray, float]:
    m = ref.size
    cols = [np.ones(m)]
    for j in range(1, degree + 1):
        cols.append(np.cos(j * ref))
        cols.append(np.sin(j * ref))
    cols.append((-1.0) ** np.arange(m))
    sol = np.linalg.solve(np.column_stack(cols), f_vals)
    return sol[:-1], float(sol[-1])


def _coeffs_to_poly(c: np.ndarray, degree: int) -> TrigPolynomial:
    a = np.zeros(degree + 1)
    b = np.zeros(degree)
    a[0] = c[0]
    for j in range(1, degree + 1):
        a[j] = c[2 * j - 1]
        b[j - 1] = c[2 * j]
    return TrigPolynomial(a, b)


def trig_minimax(
    f,
    degree_bound: int,
    tol: float = 1e-8,
    res: Resolution = DEFAULT_RESOLUTION,
    max_iterations: int = 200,
) -> MinimaxResult:
    """Best uniform approximation by trigonometric polynomials of the given degree.

    Reference of 2*degree_bound + 2 cyclically alternating points, one-point
    exchange per iteration, dense-grid residual maximisation with local
    refinement.  Converges when the grid maximum matches the reference error
    to the requested relative tolerance; the pair (reference error, running
    minimum of grid maxima) is a certified two-sided bracket throughout.
    """
    if isinstance(f, TrigPolynomial):
        f = f.handle("f")
    if degree_bound < 0:
        raise ValueError("degree bound must be non-negative")
    d = degree_bound
    m = 2 * d + 2
    ref = np.arange(m) * (TWO_PI / m)
    grid_size = max(64 * (d + 1), 512)
    grid = np.arange(grid_size) * (TWO_PI / grid_size)
    if f.discontinuities:
        dd = np.asarray(f.discontinuities, dtype=float)
        eps = np.array([-1e-6, -1e-9, 1e-9, 1e-6])
        grid = np.unique(np.concatenate([grid, ((dd[:, None] + eps[None, :]).ravel()) % TWO_PI]))
    f_grid = np.asarray(f(grid), dtype=float)

    upper = math.inf
    history: list[tuple[float, float]] = []
    poly = TrigPolynomial.constant(0.0)
    e_abs = 0.0
    for it in range(1, max_iterations + 1):
        coeffs, e_signed = _solve_reference(np.asarray(f(ref), dtype=float), ref, d)
        poly = _coeffs_to_poly(coeffs, d)
        e_abs = abs(e_signed)
        resid_grid = f_grid - poly(grid)

        def abs_resid(x: float) -> float:
            return abs(float(f(np.asarray([x]))[0]) - poly(x))

        # refine every leading local maximum: near convergence the residual
        # equioscillates, so the grid argmax alone may sit on the wrong peak
        av = np.abs(resid_grid)
        is_peak = (av >= np.roll(av, 1)) & (av >= np.roll(av, -1))
        peak_idx = np.nonzero(is_peak)[0]
        order = np.argsort(av[peak_idx])[::-1][: 2 * d + 6]
        x_star, g_max = float(grid[int(np.argmax(av))]), float(np.max(av))
        for i in peak_idx[order]:
            rx, rv = _refine_peak(abs_resid, float(grid[i]), float(av[i]), TWO_PI / grid_size, res)
            if rv > g_max:
                x_star, g_max = rx, rv
        x_star %= TWO_PI
        upper = min(upper, g_max)
        history.append((e_abs, upper))
        if g_max - e_abs <= max(tol * e_abs, 1e-12 * max(1.0, g_max)):
            return MinimaxResult(
                approximant=poly,
                error=e_abs,
                reference_points=ref.copy(),
                iterations=it,
                bracket_low=e_abs,
                bracket_high=upper,
                bracket_history=tuple(history),
            )
        r_star = float(f(np.asarray([x_star]))[0]) - poly(x_star)
        pos = int(np.searchsorted(ref, x_star))
        left = (pos - 1) % m
        right = pos % m
        if math.isclose(ref[left], x_star, abs_tol=1e-13) or math.isclose(ref[right % m], x_star, abs_tol=1e-13):
            return MinimaxResult(
                approximant=poly,
                error=e_abs,
                reference_points=ref.copy(),
                iterations=it,
                bracket_low=e_abs,
                bracket_high=upper,
                bracket_history=tuple(history),
            )
        r_left = float(f(np.asarray([ref[left]]))[0]) - poly(float(ref[left]))
        if r_left * r_star > 0.0:
            ref[left] = x_star
        else:
            ref[right] = x_star
        ref = np.sort(ref % TWO_PI)
    raise NonConvergenceError(max_iterations, e_abs, upper)


@dataclass(frozen=True)
class PeriodicSpline:
    """Periodic piecewise polynomial in the uniform cardinal basis.

    Knots sit at j * 2*pi/knot_count; the basis member at knot j is the
    partition-of-unity B-spline of the stated degree centred there, with
    images summed around the circle when its support exceeds one period.
    """

    degree: int
    knot_count: int
    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        if c.shape != (self.knot_count,):
            raise ValueError("need one coefficient per knot")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)
        spacing = TWO_PI / self.knot_count
        object.__setattr__(self, "_kernel", chi_power(spacing, self.degree + 1))
        object.__setattr__(self, "_spacing", spacing)

    def __call__(self, x):
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        spacing = self._spacing
        if self.degree == 0:
            # nearest-centre lookup; translate summation would tile a
            # discontinuous kernel and is one-ulp fragile at piece edges
            idx = np.floor(x_arr / spacing + 0.5).astype(int) % self.knot_count
            out = self.coefficients[idx]
            return out if np.ndim(x) else float(out[0])
        kern = self._kernel
        wraps = int(math.ceil(kern.support_radius / TWO_PI)) + 1
        out = np.zeros(x_arr.shape)
        for j in range(self.knot_count):
            dx = x_arr - j * spacing
            for ell in range(-wraps, wraps + 1):
                out += self.coefficients[j] * kern(dx + ell * TWO_PI)
        out *= spacing
        return out if np.ndim(x) else float(out[0])

    def handle(self, label: str = "spline") -> FunctionHandle:
        return FunctionHandle(evaluator=self.__call__, label=label, degree_hint=self.knot_count)


@dataclass(frozen=True)
class FavardOperatorDescriptor:
    """Identifies one interpolation operator instance with its sharp constant."""

    n: int
    r: int
    kind: str = "spline-interpolation"
    favard_factor: float = 0.0

    @classmethod
    def spline(cls, n: int, r: int) -> "FavardOperatorDescriptor":
        return cls(n=n, r=r, kind="spline-interpolation", favard_factor=favard_constant(r))


def _collocation_symbol(kern, knot_count: int, offset: float) -> tuple[np.ndarray, np.ndarray]:
    spacing = TWO_PI / knot_count
    wraps = int(math.ceil(kern.support_radius / TWO_PI)) + 1
    col = np.zeros(knot_count)
    for i in range(knot_count):
        total = 0.0
        for ell in range(-wraps, wraps + 1):
            total += float(kern(i * spacing + offset + ell * TWO_PI))
        col[i] = total * spacing
    return col, np.fft.fft(col)


def spline_favard(
    f,
    n: int,
    r: int,
    res: Resolution = DEFAULT_RESOLUTION,
    collocation: str = "auto",
) -> tuple[PeriodicSpline, float]:
    """Interpolate f by a periodic spline of degree r-1 with spacing pi/n.

    Odd degrees sample at the spline breakpoints, even degrees midway between
    them; both coincide with the basis centres, the parity that keeps the
    circulant collocation symbol away from zero.  collocation="shifted"
    samples half a spacing off instead, which is singular at the Nyquist
    frequency and raises.  The system is solved by discrete Fourier
    diagonalisation.  Returns the spline together with the sup-norm residual;
    for f with r bounded derivatives the residual obeys the bound
    favard_constant(r) * n^{-r} * sup|D^r f|.
    """
    if isinstance(f, TrigPolynomial):
        f = f.handle("f")
    if n < 1 or r < 1:
        raise ValueError("n and r must be positive")
    if collocation not in ("auto", "shifted"):
        raise ValueError("collocation must be 'auto' or 'shifted'")
    knot_count = 2 * n
    degree = r - 1
    spacing = TWO_PI / knot_count
    kern = chi_power(spacing, degree + 1)
    offset = 0.0 if collocation == "auto" else spacing / 2.0
    col, symbol = _collocation_symbol(kern, knot_count, offset)
    if np.min(np.abs(symbol)) < 1e-13:
        bad = int(np.argmin(np.abs(symbol)))
        raise SingularCollocationError(
            f"collocation symbol vanishes at frequency {bad} "
            f"(degree {degree}, {knot_count} knots, offset {offset!r})"
        )
    y = np.arange(knot_count) * spacing + offset
    fy = np.asarray(f(y), dtype=float)
    coeffs = np.real(np.fft.ifft(np.fft.fft(fy) / symbol))
    spline = PeriodicSpline(degree=degree, knot_count=knot_count, coefficients=coeffs)

    def resid_ev(x):
        return np.asarray(f(x), dtype=float) - np.asarray(spline(x), dtype=float)

    disc = f.discontinuities
    if degree == 0:
        edges = tuple(float(v) for v in (np.arange(knot_count) + 0.5) * spacing)
        disc = tuple(sorted(set(edges) | set(disc or ())))
    hint = max(f.degree_hint or 0, knot_count)
    residual = sup_norm(
        FunctionHandle(
            evaluator=resid_ev,
            label=f"resid({f.label})",
            degree_hint=hint,
            discontinuities=disc,
        ),
        res,
    )
    return spline, residual


def normalized_peak(tau: TrigPolynomial, res: Resolution = DEFAULT_RESOLUTION) -> tuple[TrigPolynomial, float]:
    """Scale so the sup is one and attained with positive sign; returns (poly, x0)."""
    norm, x0 = sup_norm_arg(tau.handle("tau"), res)
    if norm <= 0.0:
        raise NormalizationError("zero polynomial cannot be normalized")
    sgn = 1.0 if tau(x0) >= 0.0 else -1.0
    return tau.scaled(sgn / norm), x0


def sbs_pointwise_check(
    tau: TrigPolynomial,
    n: int,
    r: int,
    t: float,
    res: Resolution = DEFAULT_RESOLUTION,
) -> tuple[float, float]:
    """Smoothing-kernel comparison at the peak: returns (tau side, cosine side).

    tau must be normalized with peak value +1; both sides convolve with the
    same r-fold rectangle kernel of base width t, evaluated by the exact
    harmonic multiplier sinc(m t / 2)^r.
    """
    if not 0.0 < t < TWO_PI / n:
        raise ValueError("width t must lie in (0, 2*pi/n)")
    if tau.degree > n:
        raise ValueError("polynomial degree exceeds the stated bound")
    norm, x0 = sup_norm_arg(tau.handle("tau"), res)
    if abs(norm - 1.0) > 1e-8 or abs(tau(x0) - 1.0) > 1e-8:
        raise NormalizationError(
            f"expected peak value 1, found sup {norm!r} with tau(x0) = {tau(x0)!r}"
        )
    mult = np.sinc(np.arange(tau.degree + 1) * t / TWO_PI) ** r
    smoothed = TrigPolynomial(tau.cos_coeffs * mult, tau.sin_coeffs * mult[1:])
    lhs = float(smoothed(x0))
    rhs = float(np.sinc(n * t / TWO_PI) ** r)
    return lhs, rhs


def bns_ratio(
    tau: TrigPolynomial,
    n: int,
    k: int,
    h: float,
    res: Resolution = DEFAULT_RESOLUTION,
) -> tuple[float, float]:
    """Derivative bound pair: (|D^{2k} tau|_sup, n^{2k} W(tau,h) / mu_{k,h}(n)).

    Admissible h: 0 < h <= 2*pi/n and h < pi/k (both the inequality's range
    and the functional's own).
    """
    if tau.degree > n:
        raise ValueError("polynomial degree exceeds the stated bound")
    if not 0.0 < h <= TWO_PI / n or not h < math.pi / k:
        raise ValueError("width h outside the admissible range")
    p = WParams(k, h)
    lhs = sup_norm(tau.derivative(2 * k).handle("D"), res)
    mu_n = float(w_multiplier(n, p))
    rhs = n ** (2 * k) * w_norm(tau, p, res) / mu_n
    return lhs, rhs
