"""The approximation operators: kernel-weighted Haar averages of mapped signals.

An operator value at s > 0 is

    (T_n f)(s)  =  integral of  L_n(t/s) * Y_n(f(t))  dt/t  over supp f,

with L_n a singular kernel family and Y_n a pointwise map.  Signals are
compactly supported piecewise-linear profiles, optionally multiplied by a
fixed lattice direction; the integral then acts coordinatewise.

Quadrature panels are aligned with the signal breakpoints and with any
kernel jump ratios (the one-sided moment kernel jumps at t = s), so every
panel sees a smooth integrand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .kernels import KernelFamily, _kernel_cfg, _require_index
from .lattice import LatticeValue, lat_linear, lat_pnorm, lat_scale
from .pointwise import PointwiseMap
from .quadrature import (
    DEFAULT_CONFIG,
    LogInterval,
    QuadratureConfig,
    haar_nodes_union,
)


@dataclass(frozen=True)
class Signal:
    """A compactly supported signal given by linear interpolation of
    (t, y) breakpoints, zero outside [t_first, t_last].

    With ``direction`` set, the signal takes lattice values y(t) * direction;
    otherwise it is scalar-valued.
    """

    breakpoints: tuple[tuple[float, float], ...]
    direction: Optional[LatticeValue] = None

    def __post_init__(self) -> None:
        bps = tuple((float(t), float(y)) for t, y in self.breakpoints)
        if len(bps) < 2:
            raise ValueError("a signal needs at least two breakpoints")
        ts = [t for t, _ in bps]
        if ts[0] <= 0.0 or any(u >= v for u, v in zip(ts[:-1], ts[1:])):
            raise ValueError("breakpoint abscissas must be positive and increasing")
        if not all(math.isfinite(t) and math.isfinite(y) for t, y in bps):
            raise ValueError("breakpoints must be finite")
        object.__setattr__(self, "breakpoints", bps)

    @property
    def support(self) -> tuple[float, float]:
        return self.breakpoints[0][0], self.breakpoints[-1][0]

    @property
    def max_abs(self) -> float:
        return max(abs(y) for _, y in self.breakpoints)

    @property
    def is_scalar(self) -> bool:
        return self.direction is None

    @property
    def is_continuous(self) -> bool:
        """True when the profile has no jump at the support edges."""
        return self.breakpoints[0][1] == 0.0 and self.breakpoints[-1][1] == 0.0

    def profile(self, t) -> np.ndarray:
        ts = np.asarray([p[0] for p in self.breakpoints])
        ys = np.asarray([p[1] for p in self.breakpoints])
        return np.interp(np.asarray(t, dtype=float), ts, ys, left=0.0, right=0.0)


def hat_signal() -> Signal:
    """The unit hat on [1, 3] with peak at t = 2."""
    return Signal(breakpoints=((1.0, 0.0), (2.0, 1.0), (3.0, 0.0)))


def indicator_signal(a: float, b: float) -> Signal:
    """The indicator of [a, b] (discontinuous at the edges)."""
    return Signal(breakpoints=((a, 1.0), (b, 1.0)))


def parse_signal(text: str) -> Signal:
    """Parse "t1:y1,t2:y2,..." into a scalar signal."""
    try:
        pairs = tuple(
            (float(part.split(":")[0]), float(part.split(":")[1]))
            for part in text.split(",")
        )
    except (ValueError, IndexError) as exc:
        raise ValueError(f"cannot parse signal spec {text!r}") from exc
    return Signal(breakpoints=pairs)


def combine_signals(c1: float, f: Signal, c2: float, h: Signal) -> Signal:
    """The signal c1*f + c2*h, exact for continuous scalar profiles."""
    if not (f.is_scalar and h.is_scalar):
        raise ValueError("only scalar signals can be combined")
    if not (f.is_continuous and h.is_continuous):
        raise ValueError("only continuous profiles combine exactly")
    ts = sorted({t for t, _ in f.breakpoints} | {t for t, _ in h.breakpoints})
    ys = c1 * f.profile(np.asarray(ts)) + c2 * h.profile(np.asarray(ts))
    return Signal(breakpoints=tuple(zip(ts, ys.tolist())))


def abs_signal(f: Signal) -> Signal:
    """The signal |f|, with breakpoints inserted at sign changes."""
    if not f.is_scalar:
        raise ValueError("only scalar signals supported")
    bps: list[tuple[float, float]] = []
    pts = f.breakpoints
    for (t0, y0), (t1, y1) in zip(pts[:-1], pts[1:]):
        bps.append((t0, abs(y0)))
        if y0 * y1 < 0.0:
            cross = t0 + (t1 - t0) * y0 / (y0 - y1)
            bps.append((cross, 0.0))
    bps.append((pts[-1][0], abs(pts[-1][1])))
    return Signal(breakpoints=tuple(bps))


def signal_eval(f: Signal, t: float) -> LatticeValue:
    y = float(f.profile(t))
    if f.direction is None:
        return LatticeValue.scalar(y)
    return lat_scale(y, f.direction)


@dataclass(frozen=True)
class SGrid:
    """Evaluation points for operator curves."""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 1 or np.any(pts <= 0.0):
            raise ValueError("evaluation points must be positive")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @staticmethod
    def log_spaced(lo: float = 0.5, hi: float = 4.0, count: int = 201) -> "SGrid":
        if not (0.0 < lo < hi) or count < 2:
            raise ValueError("need 0 < lo < hi and count >= 2")
        return SGrid(points=np.geomspace(lo, hi, count))


def _integration_windows(
    k: KernelFamily, f: Signal, s: float
) -> list[LogInterval]:
    """Support of f clipped to s * supp(L_n), split at breakpoints and jumps."""
    lo, hi = f.support
    lo = max(lo, s * k.support[0])
    hi = min(hi, s * k.support[1])
    if lo >= hi:
        return []
    cuts = {t for t, _ in f.breakpoints if lo < t < hi}
    cuts |= {s * r for r in k.breakpoint_ratios if lo < s * r < hi}
    edges = [lo] + sorted(cuts) + [hi]
    return [LogInterval(u, v) for u, v in zip(edges[:-1], edges[1:])]


def apply_operator(
    k: KernelFamily,
    m: PointwiseMap,
    n: int,
    f: Signal,
    s: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> LatticeValue:
    """(T_n f)(s), scalar or lattice-valued to match the signal."""
    _require_index(n)
    if s <= 0.0:
        raise ValueError("evaluation point must be positive")
    windows = _integration_windows(k, f, s)
    if not windows:
        if f.direction is None:
            return LatticeValue.scalar(0.0)
        return lat_scale(0.0, f.direction)
    ts, ws = haar_nodes_union(windows, _kernel_cfg(n, cfg))
    kw = ws * k.eval(n, ts / s)
    prof = f.profile(ts)
    if f.direction is None:
        return LatticeValue.scalar(float(np.dot(kw, m.apply_array(n, prof))))
    direction = np.atleast_1d(np.asarray(f.direction.data, dtype=float))
    mapped = m.apply_array(n, prof[:, None] * direction[None, :])
    out = kw @ mapped
    if f.direction.is_scalar:
        return LatticeValue.scalar(float(out[0]))
    return LatticeValue.grid(out)


def _curve_scalar(
    k: KernelFamily,
    m: PointwiseMap,
    n: int,
    f: Signal,
    points: np.ndarray,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Operator values of a scalar signal over many evaluation points.

    Kernels without jump ratios share one set of t-nodes across all points,
    which turns the curve into a single matrix-vector product.
    """
    if f.direction is not None:
        raise ValueError("batch path requires a scalar signal")
    points = np.asarray(points, dtype=float)
    if k.breakpoint_ratios or k.support != (0.0, math.inf):
        return np.asarray(
            [apply_operator(k, m, n, f, float(s), cfg).data for s in points]
        )
    lo, hi = f.support
    cuts = [lo] + [t for t, _ in f.breakpoints if lo < t < hi] + [hi]
    windows = [LogInterval(u, v) for u, v in zip(cuts[:-1], cuts[1:])]
    ts, ws = haar_nodes_union(windows, _kernel_cfg(n, cfg))
    weighted = ws * m.apply_array(n, f.profile(ts))
    out = np.empty_like(points)
    block = 4096
    for start in range(0, points.size, block):
        chunk = points[start : start + block]
        out[start : start + block] = k.eval(n, ts[None, :] / chunk[:, None]) @ weighted
    return out


def operator_curve(
    k: KernelFamily,
    m: PointwiseMap,
    n: int,
    f: Signal,
    grid: SGrid,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> list[LatticeValue]:
    """(T_n f) sampled over the grid."""
    if f.direction is None:
        vals = _curve_scalar(k, m, n, f, grid.points, cfg)
        return [LatticeValue.scalar(float(v)) for v in vals]
    return [apply_operator(k, m, n, f, float(s), cfg) for s in grid.points]


def uniform_error(
    k: KernelFamily,
    m: PointwiseMap,
    n: int,
    f: Signal,
    grid: SGrid,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """max over the grid of the sup-norm distance |(T_n f)(s) - f(s)|."""
    if f.direction is None:
        vals = _curve_scalar(k, m, n, f, grid.points, cfg)
        return float(np.max(np.abs(vals - f.profile(grid.points))))
    worst = 0.0
    for s in grid.points:
        diff = lat_linear(
            1.0, apply_operator(k, m, n, f, float(s), cfg), -1.0, signal_eval(f, float(s))
        )
        worst = max(worst, lat_pnorm(diff, math.inf))
    return worst
