"""Averaging kernels and the classical constants attached to them.

Contents: the unit-mass triangle weight, iterated rectangular smoothing
kernels (cardinal B-spline shapes), the signed piecewise-linear kernel whose
integer-vertex values form an exact rational table, Favard-type constants,
and the secant bound used for inverse estimates.  Exact rational arithmetic
is used wherever the quantities are rational; floats enter only at the
evaluation boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

PI = math.pi

# Certified decimal enclosures, floor/ceiling at 40 significant decimals.
# Digits generated with mpmath at 60 decimal digits and truncated; each pair
# brackets the true constant strictly.
TWO_LN2_LO = Fraction(1386294361119890618834464242916353136151, 10**39)
TWO_LN2_HI = TWO_LN2_LO + Fraction(1, 10**39)
PI2_OVER_6_LO = Fraction(16449340668482264364724151666460251892189, 10**40)
PI2_OVER_6_HI = PI2_OVER_6_LO + Fraction(1, 10**40)


def binom_exact(n: int, m: int) -> int:
    if m < 0 or m > n:
        return 0
    return math.comb(n, m)


def _sinc(z):
    """sin(z)/z with the removable singularity filled in."""
    return np.sinc(np.asarray(z, dtype=float) / PI)


@dataclass(frozen=True)
class PiecewiseLinearKernel:
    """Compactly supported piecewise-linear kernel on [-R, R], zero outside.

    Vertices are (breakpoints[i], vertex_values[i]); evaluation interpolates
    linearly and vanishes beyond the support.
    """

    breakpoints: np.ndarray
    vertex_values: np.ndarray
    support_radius: float

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vv = np.asarray(self.vertex_values, dtype=float)
        if bp.ndim != 1 or bp.shape != vv.shape or bp.size < 2:
            raise ValueError("breakpoints and vertex values must be matching 1-d arrays")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if not math.isclose(-bp[0], self.support_radius) or not math.isclose(bp[-1], self.support_radius):
            raise ValueError("breakpoints must span [-support_radius, support_radius]")
        bp.setflags(write=False)
        vv.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "vertex_values", vv)
        # cumulative integral at each breakpoint (trapezoid rule is exact here)
        seg = 0.5 * (vv[1:] + vv[:-1]) * np.diff(bp)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        cum.setflags(write=False)
        object.__setattr__(self, "_cumulative_at_bp", cum)

    def __call__(self, t):
        return np.interp(np.asarray(t, dtype=float), self.breakpoints, self.vertex_values, left=0.0, right=0.0)

    def mass(self) -> float:
        return float(self._cumulative_at_bp[-1])

    def abs_integral(self) -> float:
        """Integral of |kernel|; sign changes inside a segment are split exactly."""
        bp, vv = self.breakpoints, self.vertex_values
        total = 0.0
        for i in range(bp.size - 1):
            dx = bp[i + 1] - bp[i]
            v0, v1 = vv[i], vv[i + 1]
            if v0 * v1 >= 0.0:
                total += 0.5 * abs(v0 + v1) * dx
            else:
                split = v0 / (v0 - v1)
                total += 0.5 * dx * (abs(v0) * split + abs(v1) * (1.0 - split))
        return total

    def cumulative(self, t):
        """Exact antiderivative from -support_radius, vectorised over t."""
        t = np.asarray(t, dtype=float)
        bp, vv = self.breakpoints, self.vertex_values
        idx = np.clip(np.searchsorted(bp, t, side="right") - 1, 0, bp.size - 2)
        x0 = bp[idx]
        slope = (vv[idx + 1] - vv[idx]) / (bp[idx + 1] - x0)
        dt = np.clip(t, bp[0], bp[-1]) - x0
        return self._cumulative_at_bp[idx] + vv[idx] * dt + 0.5 * slope * dt * dt

    def multiplier(self, omega):
        """Fourier multiplier int K(t) cos(omega t) dt, exact per linear segment."""
        w = np.asarray(omega, dtype=float)
        scalar = w.ndim == 0
        w = np.atleast_1d(w)
        safe = np.where(np.abs(w) < 1e-12, 1.0, w)
        bp, vv = self.breakpoints, self.vertex_values
        s = np.diff(vv) / np.diff(bp)
        wb = np.outer(safe, bp)
        sin_terms = (vv[1:] * np.sin(wb[:, 1:]) - vv[:-1] * np.sin(wb[:, :-1])) / safe[:, None]
        cos_terms = s * (np.cos(wb[:, 1:]) - np.cos(wb[:, :-1])) / (safe * safe)[:, None]
        out = np.sum(sin_terms, axis=1) + np.sum(cos_terms, axis=1)
        out = np.where(np.abs(w) < 1e-12, self.mass(), out)
        return float(out[0]) if scalar else out

    def rescaled(self, h: float) -> "PiecewiseLinearKernel":
        """Width scaling K_h(x) = (1/h) K(x/h); preserves the mass."""
        if h <= 0:
            raise ValueError("scale must be positive")
        return PiecewiseLinearKernel(self.breakpoints * h, self.vertex_values / h, self.support_radius * h)


def triangle_kernel(h: float) -> PiecewiseLinearKernel:
    """Unit-mass triangle weight: (1/h)(1 - |t|/h) on [-h, h], zero outside."""
    if not 0.0 < h < PI:
        raise ValueError("triangle width must lie in (0, pi)")
    return PiecewiseLinearKernel(np.array([-h, 0.0, h]), np.array([0.0, 1.0 / h, 0.0]), h)


@dataclass(frozen=True)
class RationalVertexTable:
    """Exact rational data for the signed kernel of order k.

    a[j-1] = C(2k, k+j)/C(2k, k) for j = 1..k; b[i] is the kernel value at
    integer abscissa i for the width-1 kernel, i = 0..k, with b[k] = 0.
    """

    k: int
    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    def a_floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.a])

    def b_floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.b])


def lambda_vertices(k: int) -> RationalVertexTable:
    """Exact rational vertex table; independent of the float kernel assembly."""
    if k < 1:
        raise ValueError("order k must be at least 1")
    central = binom_exact(2 * k, k)
    a = tuple(Fraction(binom_exact(2 * k, k + j), central) for j in range(1, k + 1))
    b = []
    for i in range(k):
        acc = Fraction(0)
        for j in range(i + 1, k + 1):
            acc += (
                Fraction(binom_exact(2 * k, k - j))
                * (-1) ** (j + 1)
                * Fraction(1, j)
                * (1 - Fraction(i, j))
            )
        b.append(2 * acc / central)
    b.append(Fraction(0))
    return RationalVertexTable(k=k, a=a, b=tuple(b))


def lambda_kernel(k: int, h: float) -> PiecewiseLinearKernel:
    """Signed piecewise-linear kernel: 2 sum_j (-1)^(j+1) a_j T_jh stacked triangles.

    T_jh(x) = (1/j) T_h(x/j) is the width-jh unit-mass triangle.  Assembled in
    floating point on the vertex grid {i h}; the rational table gives the same
    vertices exactly and is used as an independent cross-check.
    """
    if k < 1:
        raise ValueError("order k must be at least 1")
    if not 0.0 < k * h < PI:
        raise ValueError("kernel support k*h must lie in (0, pi)")
    table = lambda_vertices(k)
    a = table.a_floats()
    idx = np.arange(-k, k + 1)
    values = np.zeros(idx.size)
    for j in range(1, k + 1):
        tri = np.clip(1.0 - np.abs(idx) / j, 0.0, None) / (j * h)
        values += 2.0 * (-1.0) ** (j + 1) * a[j - 1] * tri
    values[0] = 0.0
    values[-1] = 0.0
    return PiecewiseLinearKernel(idx * h, values, k * h)


def lambda_multiplier(omega, k: int, h: float):
    """Closed-form Fourier multiplier of the signed kernel: 2 sum (-1)^(j+1) a_j sinc^2(j omega h / 2)."""
    a = lambda_vertices(k).a_floats()
    omega = np.asarray(omega, dtype=float)
    acc = np.zeros(omega.shape)
    for j in range(1, k + 1):
        acc += 2.0 * (-1.0) ** (j + 1) * a[j - 1] * _sinc(j * omega * h / 2.0) ** 2
    return acc if acc.shape else float(acc)


# --- iterated rectangular smoothing kernels -------------------------------

_CHI_EXACT_LIMIT = 16
_chi_piece_cache: dict[int, tuple[list[list[Fraction]], list[Fraction]]] = {}


def _chi_pieces(r: int) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Exact width-1 piecewise polynomials for the r-fold rectangle convolution.

    Piece i lives on [i - r/2, i + 1 - r/2] in the local variable
    u = x - (i - r/2), coefficients ascending.  Also returns the cumulative
    masses at the piece left endpoints.  Cached per order.
    """
    if r in _chi_piece_cache:
        return _chi_piece_cache[r]
    pieces = [[Fraction(1)]]
    for _ in range(1, r):
        anti = []
        masses = [Fraction(0)]
        for c in pieces:
            anti.append([Fraction(0)] + [c[p] / (p + 1) for p in range(len(c))])
            masses.append(masses[-1] + sum(anti[-1]))
        new_pieces = []
        for i in range(len(pieces) + 1):
            upper = (
                [masses[i]] + anti[i][1:]
                if i < len(pieces)
                else [masses[-1]]
            )
            lower = (
                [masses[i - 1]] + anti[i - 1][1:]
                if i >= 1
                else [Fraction(0)]
            )
            width = max(len(upper), len(lower))
            upper = upper + [Fraction(0)] * (width - len(upper))
            lower = lower + [Fraction(0)] * (width - len(lower))
            new_pieces.append([u - l for u, l in zip(upper, lower)])
        pieces = new_pieces
    masses = [Fraction(0)]
    for c in pieces:
        masses.append(masses[-1] + sum(c[p] / (p + 1) for p in range(len(c))))
    _chi_piece_cache[r] = (pieces, masses)
    return pieces, masses


@dataclass(frozen=True)
class SmoothingKernelPower:
    """r-fold self-convolution of the unit-mass rectangle of width h.

    Unit mass, support [-r h/2, r h/2], polynomial of degree r-1 between
    consecutive breakpoints.  Exact coefficients for r <= 16; a sampled
    approximation beyond that.
    """

    base_width: float
    power: int
    breakpoints: np.ndarray
    support_radius: float
    _coeffs: np.ndarray = field(repr=False)
    _cum0: np.ndarray = field(repr=False)
    _anti: np.ndarray = field(repr=False)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        h = self.base_width
        idx = np.clip(np.searchsorted(self.breakpoints, t, side="right") - 1, 0, self._coeffs.shape[0] - 1)
        u = (t - self.breakpoints[idx]) / h
        c = self._coeffs[idx]
        val = np.zeros(u.shape)
        for p in range(c.shape[-1] - 1, -1, -1):
            val = val * u + c[..., p]
        # half-open support so stacked translates tile without double counting
        inside = (t >= self.breakpoints[0]) & (t < self.breakpoints[-1])
        return np.where(inside, val / h, 0.0)

    def cumulative(self, t):
        t = np.asarray(t, dtype=float)
        h = self.base_width
        idx = np.clip(np.searchsorted(self.breakpoints, t, side="right") - 1, 0, self._coeffs.shape[0] - 1)
        u = (np.clip(t, self.breakpoints[0], self.breakpoints[-1]) - self.breakpoints[idx]) / h
        ca = self._anti[idx]
        val = np.zeros(u.shape)
        for p in range(ca.shape[-1] - 1, 0, -1):
            val = (val + ca[..., p]) * u
        return self._cum0[idx] + val

    def mass(self) -> float:
        return float(self.cumulative(self.support_radius))

    def multiplier(self, omega):
        """Fourier multiplier sinc(omega h / 2)^r."""
        q = np.asarray(omega, dtype=float) * self.base_width / 2.0
        out = _sinc(q) ** self.power
        return out if out.shape else float(out)


def chi_power(h: float, r: int) -> SmoothingKernelPower:
    """Construct the r-fold rectangle convolution kernel of base width h.

    Width is unconstrained here; periodic users either need support inside
    one period (convolutions check this themselves) or wrap images (splines).
    """
    if r < 1:
        raise ValueError("power must be at least 1")
    if h <= 0.0:
        raise ValueError("base width must be positive")
    if r <= _CHI_EXACT_LIMIT:
        pieces, masses = _chi_pieces(r)
        width = max(len(c) for c in pieces)
        coeffs = np.array([[float(c[p]) if p < len(c) else 0.0 for p in range(width)] for c in pieces])
        anti = np.zeros((len(pieces), width + 1))
        for i, c in enumerate(pieces):
            for p in range(len(c)):
                anti[i, p + 1] = float(c[p] / (p + 1))
        cum0 = np.array([float(m) for m in masses[:-1]])
        bp = (np.arange(r + 1) - r / 2.0) * h
        return SmoothingKernelPower(
            base_width=h, power=r, breakpoints=bp, support_radius=r * h / 2.0,
            _coeffs=coeffs, _cum0=cum0, _anti=anti,
        )
    return _chi_power_sampled(h, r)


def _chi_power_sampled(h: float, r: int) -> SmoothingKernelPower:
    """Grid-convolution fallback for very high orders, piecewise-linearised."""
    per_piece = 64
    n = r * per_piece + 1
    grid = np.linspace(-r * h / 2.0, r * h / 2.0, n)
    dx = grid[1] - grid[0]
    vals = np.zeros(n)
    vals[np.abs(grid) <= h / 2.0] = 1.0 / h
    base = vals.copy()
    for _ in range(r - 1):
        vals = np.convolve(vals, base, mode="same") * dx
    vals *= 1.0 / float(np.sum(0.5 * (vals[1:] + vals[:-1]) * dx))
    coeffs = np.zeros((n - 1, 2))
    coeffs[:, 0] = vals[:-1] * h
    coeffs[:, 1] = (vals[1:] - vals[:-1]) * h / (dx / h)
    anti = np.zeros((n - 1, 3))
    anti[:, 1] = coeffs[:, 0]
    anti[:, 2] = coeffs[:, 1] / 2.0
    seg = 0.5 * (vals[1:] + vals[:-1]) * dx
    cum0 = np.concatenate([[0.0], np.cumsum(seg)])[:-1]
    return SmoothingKernelPower(
        base_width=h, power=r, breakpoints=grid, support_radius=r * h / 2.0,
        _coeffs=coeffs, _cum0=cum0, _anti=anti,
    )


# --- constants -------------------------------------------------------------

def favard_tail_bound(r: int, terms: int) -> float:
    """Documented truncation bound after summing |j| <= terms: (4/pi) * (4J-1)^(-r) / (2r)."""
    if r < 1 or terms < 1:
        raise ValueError("order and term count must be positive")
    return (4.0 / PI) * (4.0 * terms - 1.0) ** (-r) / (2.0 * r)


def favard_constant(r: int, tol: float = 1e-14) -> float:
    """(4/pi) sum over integers j of (4j+1)^(-r-1).

    Symmetric partial sums with a midpoint Euler-Maclaurin tail correction
    (integral, first and third derivative terms); the magnitude of the next
    correction bounds the remainder and drives the stopping rule.  The naked
    integral bound alone would need ~1e12 terms at r = 1, hence the
    correction.
    """
    if r < 1:
        raise ValueError("order must be at least 1")
    s = r + 1
    sgn = (-1.0) ** s

    def pair(base: np.ndarray, expo: float) -> np.ndarray:
        return (4.0 * base + 1.0) ** expo + sgn * (4.0 * base - 1.0) ** expo

    terms = 64
    while True:
        j = np.arange(1, terms + 1, dtype=float)
        partial = 1.0 + float(np.sum(pair(j, -float(s))))
        m = terms + 0.5
        integral = ((4 * m + 1.0) ** (1 - s) + sgn * (4 * m - 1.0) ** (1 - s)) / (4.0 * (s - 1))
        g1 = -4.0 * s * pair(np.array(m), -(s + 1.0))
        g3 = -(4.0 ** 3) * s * (s + 1) * (s + 2) * pair(np.array(m), -(s + 3.0))
        tail = integral + g1 / 24.0 - 7.0 * g3 / 5760.0
        g5 = (4.0 ** 5) * s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * pair(np.array(m), -(s + 5.0))
        remainder = (31.0 / 967680.0) * abs(float(g5))
        if (4.0 / PI) * remainder < 0.5 * tol or terms > 1 << 20:
            return (4.0 / PI) * (partial + float(tail))
        terms *= 2


def c_alpha_bound(alpha: float) -> float:
    """Secant bound sec(pi / (2 alpha)) for the inverse-estimate constant; alpha > 1."""
    if alpha <= 1.0:
        raise ValueError("alpha must exceed 1")
    return 1.0 / math.cos(PI / (2.0 * alpha))


def c_alpha_envelope(alpha: float) -> float:
    """Elementary majorant (4/pi) (1 - alpha^-2)^(-1) of the secant bound."""
    if alpha <= 1.0:
        raise ValueError("alpha must exceed 1")
    return (4.0 / PI) / (1.0 - alpha ** (-2))


def constants_table(k_values) -> list[dict]:
    """Rows for the constants report: vertex values, |kernel| mass, Favard constant."""
    rows = []
    for k in k_values:
        table = lambda_vertices(k)
        bf = table.b_floats()
        # the absolute integral does not depend on the width, so any
        # admissible h works; 1/k keeps k*h inside (0, pi) for every k
        kern = lambda_kernel(k, 1.0 / k)
        row = {"k": k}
        for i in range(5):
            row[f"b{i}"] = float(bf[i]) if i < bf.size else 0.0
        row["lambda_l1"] = kern.abs_integral()
        row["K_2k"] = favard_constant(2 * k)
        rows.append(row)
    return rows
