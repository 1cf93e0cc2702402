"""Finite differences and the uniform modulus of smoothness.

Forward differences use the orientation whose Fourier multiplier is
(e^{imh} - 1)^r, so the first difference of cos at step h is
cos(x+h) - cos(x).  The signed central difference of even order 2k acts on
the m-th harmonic as multiplication by (2 sin(mt/2))^{2k}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .periodic import (
    DEFAULT_RESOLUTION,
    FunctionHandle,
    Resolution,
    TrigPolynomial,
    sup_norm,
    sup_norm_arg,
    wrap_angle,
)


def binomial(n: int, m: int) -> int:
    """Exact binomial coefficient; zero outside 0 <= m <= n."""
    if m < 0 or m > n:
        return 0
    return math.comb(n, m)


@dataclass(frozen=True)
class DifferenceSpec:
    """One concrete difference application: order, step, and base point."""

    order: int
    step: float
    base: float = 0.0

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("difference order must be at least 1")

    def apply(self, f) -> float:
        return forward_difference(f, self.order, self.step, self.base)


def _forward_weights(r: int) -> list[int]:
    return [(-1) ** (r - j) * math.comb(r, j) for j in range(r + 1)]


def _central_weights(k: int) -> list[int]:
    return [(-1) ** j * math.comb(2 * k, k + j) for j in range(-k, k + 1)]


def _weighted_shift_sum(f, weights, t: float, x, j_start: int):
    """sum_j w_j f(x + (j_start + j) t), compensated for large orders."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        return math.fsum(
            w * float(f(float(x) + (j_start + j) * t)) for j, w in enumerate(weights)
        )
    total = np.zeros(x.shape)
    comp = np.zeros(x.shape)
    for j, w in enumerate(weights):
        term = w * np.asarray(f(x + (j_start + j) * t), dtype=float)
        y = term - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total


def forward_difference(f, r: int, h: float, x):
    """r-th forward difference at step h, multiplier (e^{imh} - 1)^r."""
    if r < 1:
        raise ValueError("difference order must be at least 1")
    return _weighted_shift_sum(f, _forward_weights(r), h, x, 0)


def central_difference(f, k: int, t: float, x):
    """Signed central difference of order 2k, multiplier (2 sin(mt/2))^{2k}."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return _weighted_shift_sum(f, _central_weights(k), t, x, -k)


def forward_difference_poly(p: TrigPolynomial, r: int, h: float) -> TrigPolynomial:
    if r < 1:
        raise ValueError("difference order must be at least 1")
    m = np.arange(p.degree + 1)
    lam = (np.exp(1j * m * h) - 1.0) ** r
    gamma = (p.cos_coeffs - 1j * np.concatenate([[0.0], p.sin_coeffs])) * lam
    return TrigPolynomial(cos_coeffs=gamma.real, sin_coeffs=-gamma.imag[1:])


def central_difference_poly(p: TrigPolynomial, k: int, t: float) -> TrigPolynomial:
    if k < 1:
        raise ValueError("k must be at least 1")
    m = np.arange(p.degree + 1)
    lam = (2.0 * np.sin(m * t / 2.0)) ** (2 * k)
    return TrigPolynomial(cos_coeffs=p.cos_coeffs * lam, sin_coeffs=p.sin_coeffs * lam[1:])


def _difference_handle(f: FunctionHandle, r: int, t: float) -> FunctionHandle:
    weights = _forward_weights(r)

    def ev(x):
        return _weighted_shift_sum(f, weights, t, x, 0)

    disc = None
    if f.discontinuities is not None:
        pts = [wrap_angle(d - j * t) for d in f.discontinuities for j in range(r + 1)]
        disc = tuple(sorted(set(pts)))
    return FunctionHandle(
        evaluator=ev,
        label=f"diff[{r},{t:.6g}]({f.label})",
        degree_hint=f.degree_hint,
        discontinuities=disc,
        piecewise_constant=f.piecewise_constant,
    )


def _step_difference_norm(f: FunctionHandle, r: int, t: float) -> float:
    """Exact sup for piecewise-constant f: evaluate on plateau midpoints."""
    jumps = np.array(
        sorted({wrap_angle(d - j * t) for d in f.discontinuities for j in range(r + 1)})
    )
    edges = np.concatenate([jumps, [jumps[0] + 2.0 * math.pi]])
    mids = 0.5 * (edges[:-1] + edges[1:])
    vals = _weighted_shift_sum(f, _forward_weights(r), t, mids, 0)
    return float(np.max(np.abs(vals)))


def difference_norm(f, r: int, t: float, res: Resolution = DEFAULT_RESOLUTION) -> float:
    """sup over x of |r-th difference| at step t."""
    if t == 0.0:
        return 0.0
    if isinstance(f, TrigPolynomial):
        return sup_norm(forward_difference_poly(f, r, t).handle("d"), res)
    if isinstance(f, FunctionHandle):
        if f.trig is not None:
            return sup_norm(forward_difference_poly(f.trig, r, t).handle("d"), res)
        if f.piecewise_constant and f.discontinuities:
            return _step_difference_norm(f, r, t)
        return sup_norm(_difference_handle(f, r, t), res)
    return sup_norm(_difference_handle(FunctionHandle.from_scalar(f), r, t), res)


def _refine_t(norm_fn, t0: float, v0: float, step: float, lo: float, hi: float, res: Resolution) -> float:
    """Parabolic ascent on the step axis, clamped to [lo, hi]; never decreases v0."""
    best_t, best_v = t0, v0
    for _ in range(min(res.max_refine_iters, 16)):
        tl = max(lo, best_t - step)
        tr = min(hi, best_t + step)
        vl = norm_fn(tl) if tl < best_t else best_v
        vr = norm_fn(tr) if tr > best_t else best_v
        denom = vl - 2.0 * best_v + vr
        if denom < 0.0:
            shift = min(step, max(-step, 0.5 * (vl - vr) / denom * step))
            cand = min(hi, max(lo, best_t + shift))
        else:
            cand = tl if vl > vr else tr
        vc = norm_fn(cand) if cand != best_t else best_v
        prev = best_v
        for tt, vv in ((tl, vl), (tr, vr), (cand, vc)):
            if vv > best_v:
                best_t, best_v = tt, vv
        step *= 0.5
        if step < 1e-14 or best_v - prev < res.refine_tol:
            break
    return best_v


def _trig_batch_norms(p: TrigPolynomial, r: int, ts: np.ndarray, res: Resolution) -> np.ndarray:
    """Dense-grid difference norms for many steps at once (no x refinement)."""
    m = np.arange(p.degree + 1)
    size = max(res.grid_size, 32 * max(p.degree, 1))
    x = np.linspace(0.0, 2.0 * math.pi, size, endpoint=False)
    cos_m = np.cos(np.outer(m, x))
    sin_m = np.sin(np.outer(m, x))
    gamma = p.cos_coeffs - 1j * np.concatenate([[0.0], p.sin_coeffs])
    lam = (np.exp(1j * np.outer(ts, m)) - 1.0) ** r
    g = lam * gamma
    vals = g.real @ cos_m - g.imag @ sin_m
    return np.max(np.abs(vals), axis=1)


def omega_profile(
    f,
    r: int,
    deltas,
    res: Resolution = DEFAULT_RESOLUTION,
    step_grid_size: int = 256,
) -> np.ndarray:
    """Modulus of smoothness at each delta; non-decreasing along sorted deltas.

    One shared step grid (union of an even base grid up to max(delta) with the
    requested deltas themselves) is swept once; each delta takes the running
    max over grid points below it, then the winning step is refined locally.
    """
    deltas = np.asarray(deltas, dtype=float)
    if np.any(deltas < 0.0):
        raise ValueError("delta must be non-negative")
    out = np.zeros(deltas.shape)
    positive = deltas > 0.0
    if not np.any(positive):
        return out
    dmax = float(np.max(deltas))
    base = np.linspace(0.0, dmax, step_grid_size + 1)[1:]
    grid = np.unique(np.concatenate([base, deltas[positive]]))

    def norm_fn(t: float) -> float:
        return difference_norm(f, r, t, res)

    trig = f if isinstance(f, TrigPolynomial) else getattr(f, "trig", None)
    if trig is not None:
        vals = _trig_batch_norms(trig, r, grid, res)
    else:
        vals = np.array([norm_fn(t) for t in grid])
    order = np.argsort(deltas)
    running = 0.0
    spacing = grid[1] - grid[0] if grid.size > 1 else dmax
    for idx in order:
        d = deltas[idx]
        if d <= 0.0:
            out[idx] = 0.0
            continue
        count = int(np.searchsorted(grid, d * (1.0 + 1e-15), side="right"))
        j = int(np.argmax(vals[:count]))
        t0 = float(grid[j])
        refined = _refine_t(norm_fn, t0, norm_fn(t0), spacing, 1e-15, d, res)
        running = max(running, refined)
        out[idx] = running
    return out


def omega(
    f,
    r: int,
    delta: float,
    res: Resolution = DEFAULT_RESOLUTION,
    step_grid_size: int = 256,
) -> float:
    """omega_r(f, delta) = sup over 0 < t <= delta of the difference norm."""
    return float(omega_profile(f, r, np.array([delta]), res, step_grid_size)[0])
