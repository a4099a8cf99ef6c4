"""Singular kernel families on (0, inf) under the Haar measure dt/t.

Three built-in families, each indexed by n and concentrating at t = 1 in the
log metric as n grows:

* ``MomentKernel``        n * t**n on (0, 1)
* ``GaussWeierstrassKernel``  a Gaussian of width ~ 2/n in ln t
* ``PoissonCauchyKernel``     a Cauchy-type power law (1 + n^2 ln^2 t)^-p

Each family carries exact one-sided masses (the integral of the kernel over
(0, c) or (c, inf)), so truncated quadrature can always be completed with an
exact remainder.  Two further families, a rescaled wrapper and a fixed-width
log-uniform bump, serve as negative controls for the singularity checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .quadrature import (
    DEFAULT_CONFIG,
    LogInterval,
    QuadratureConfig,
    haar_nodes,
    integrate_haar,
)

_SQRT_PI = math.sqrt(math.pi)


def erf(x: float) -> float:
    """Gauss error function (2/sqrt(pi)) * integral of exp(-w^2) over [0, x]."""
    return math.erf(x)


_erf_arr = np.vectorize(math.erf, otypes=[float])


def double_factorial(m: int) -> int:
    """m!! for odd m >= -1, with (-1)!! = 1."""
    if m < -1 or m % 2 == 0:
        raise ValueError("double factorial needs odd m >= -1")
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def _cauchy_upper(p: int, a: float) -> float:
    """Integral of (1 + u^2)^-p over [a, inf), by the standard reduction.

    The base case uses atan2(1, a) = pi/2 - atan(a), which stays accurate
    for large positive a where the direct difference would cancel.
    """
    val = math.atan2(1.0, a)
    for k in range(2, p + 1):
        val = (-a * (1.0 + a * a) ** (-(k - 1)) + (2 * k - 3) * val) / (2 * (k - 1))
    return val


class TailEstimate(NamedTuple):
    """An analytic estimate of kernel mass outside [1/delta, delta]."""

    value: float
    tag: str  # "exact" or "bound"


def _require_index(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"kernel index must be an integer >= 1, got {n!r}")


def _require_positive(t: np.ndarray) -> None:
    if np.any(t <= 0.0):
        raise ValueError("kernel abscissas must be positive")


class KernelFamily:
    """Base class: a nonnegative kernel family L_n(t), one function per n."""

    kind: str = ""
    p: Optional[int] = None
    # ratios t at which L_n jumps; operator quadrature splits panels there
    breakpoint_ratios: tuple[float, ...] = ()
    # (lo, hi) outside of which L_n vanishes identically
    support: tuple[float, float] = (0.0, math.inf)

    @property
    def total_mass(self) -> float:
        """Exact value of the full Haar integral of L_n (n-independent)."""
        return 1.0

    @property
    def has_exact_normalization(self) -> bool:
        return self.total_mass == 1.0

    def eval(self, n: int, t):
        raise NotImplementedError

    def sup_bound(self, n: int) -> float:
        """Exact supremum of L_n over t."""
        raise NotImplementedError

    def mass_below(self, n: int, c: float) -> float:
        """Exact Haar mass of L_n over (0, c)."""
        raise NotImplementedError

    def mass_above(self, n: int, c: float) -> float:
        """Exact Haar mass of L_n over (c, inf)."""
        raise NotImplementedError

    def analytic_tail(self, n: int, delta: float) -> TailEstimate:
        """Closed-form estimate of the mass outside [1/delta, delta]."""
        raise NotImplementedError

    def tail_bound_threshold(self, delta: float) -> int:
        """Least n from which the analytic tail estimate is claimed to hold."""
        return 1

    def closed_window(self, n: int, a: float, b: float, s) -> Optional[np.ndarray]:
        """Closed form of integral L_n(t/s) dt/t over [a, b], if available."""
        return None


@dataclass(frozen=True)
class MomentKernel(KernelFamily):
    """L_n(t) = n * t^n on (0, 1); one-sided, with fully exact tail algebra."""

    kind: str = "moment"
    breakpoint_ratios: tuple[float, ...] = (1.0,)
    support: tuple[float, float] = (0.0, 1.0)

    def eval(self, n: int, t):
        _require_index(n)
        t = np.asarray(t, dtype=float)
        _require_positive(t)
        out = np.zeros_like(t)
        inside = t < 1.0
        out[inside] = n * t[inside] ** n
        return out if out.ndim else float(out)

    def sup_bound(self, n: int) -> float:
        return float(n)

    def mass_below(self, n: int, c: float) -> float:
        _require_index(n)
        if c <= 0.0:
            return 0.0
        return min(c, 1.0) ** n

    def mass_above(self, n: int, c: float) -> float:
        return self.total_mass - self.mass_below(n, c)

    def analytic_tail(self, n: int, delta: float) -> TailEstimate:
        _require_index(n)
        if delta <= 1.0:
            raise ValueError("delta must exceed 1")
        return TailEstimate(delta ** (-n), "exact")

    def closed_window(self, n: int, a: float, b: float, s):
        # piecewise in s: nothing below a, partial window on [a, b), full above
        s = np.asarray(s, dtype=float)
        with np.errstate(over="ignore"):
            partial = 1.0 - (a / s) ** n
            full = (b / s) ** n - (a / s) ** n
        out = np.where(s >= b, full, np.where(s >= a, partial, 0.0))
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class GaussWeierstrassKernel(KernelFamily):
    """L_n(t) = n/(2 sqrt(pi)) * exp(-(n^2/4) ln^2 t), Gaussian in ln t."""

    kind: str = "mgw"

    def eval(self, n: int, t):
        _require_index(n)
        t = np.asarray(t, dtype=float)
        _require_positive(t)
        x = np.log(t)
        out = (n / (2.0 * _SQRT_PI)) * np.exp(-0.25 * n * n * x * x)
        return out if out.ndim else float(out)

    def sup_bound(self, n: int) -> float:
        return n / (2.0 * _SQRT_PI)

    def mass_below(self, n: int, c: float) -> float:
        _require_index(n)
        if c <= 0.0:
            return 0.0
        return 0.5 * math.erfc(-0.5 * n * math.log(c))

    def mass_above(self, n: int, c: float) -> float:
        _require_index(n)
        if c <= 0.0:
            return self.total_mass
        return 0.5 * math.erfc(0.5 * n * math.log(c))

    def analytic_tail(self, n: int, delta: float) -> TailEstimate:
        _require_index(n)
        if delta <= 1.0:
            raise ValueError("delta must exceed 1")
        return TailEstimate((2.0 / _SQRT_PI) * math.exp(-0.5 * n * math.log(delta)), "bound")

    def tail_bound_threshold(self, delta: float) -> int:
        # the exponential bound dominates the true (Gaussian) tail from here on
        return max(1, math.ceil(4.0 / math.log(delta)))

    def closed_window(self, n: int, a: float, b: float, s):
        s = np.asarray(s, dtype=float)
        hi = _erf_arr(0.5 * n * np.log(b / s))
        lo = _erf_arr(0.5 * n * np.log(a / s))
        out = 0.5 * (hi - lo)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class PoissonCauchyKernel(KernelFamily):
    """L_n(t) = C_p * n / (1 + n^2 ln^2 t)^p with p >= 2 an integer."""

    p: int = 2
    kind: str = "mpc"

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or self.p < 2:
            raise ValueError("p must be an integer >= 2")

    @property
    def constant(self) -> float:
        """C_p = 2^(p-1) (p-1)! / (pi * (2p-3)!!), making the mass exactly 1."""
        p = self.p
        return 2 ** (p - 1) * math.factorial(p - 1) / (math.pi * double_factorial(2 * p - 3))

    def eval(self, n: int, t):
        _require_index(n)
        t = np.asarray(t, dtype=float)
        _require_positive(t)
        x = n * np.log(t)
        out = self.constant * n / (1.0 + x * x) ** self.p
        return out if out.ndim else float(out)

    def sup_bound(self, n: int) -> float:
        return self.constant * n

    def mass_below(self, n: int, c: float) -> float:
        _require_index(n)
        if c <= 0.0:
            return 0.0
        return self.constant * _cauchy_upper(self.p, -n * math.log(c))

    def mass_above(self, n: int, c: float) -> float:
        _require_index(n)
        if c <= 0.0:
            return self.total_mass
        return self.constant * _cauchy_upper(self.p, n * math.log(c))

    def analytic_tail(self, n: int, delta: float) -> TailEstimate:
        _require_index(n)
        if delta <= 1.0:
            raise ValueError("delta must exceed 1")
        value = self.constant * 2.0 * math.atan2(1.0, n * math.log(delta))
        return TailEstimate(value, "bound")


@dataclass(frozen=True)
class ScaledKernel(KernelFamily):
    """A kernel family multiplied by a constant; breaks normalization on purpose."""

    base: KernelFamily = MomentKernel()
    factor: float = 2.0
    kind: str = "scaled"

    def __post_init__(self) -> None:
        if self.factor <= 0.0:
            raise ValueError("scale factor must be positive")
        object.__setattr__(self, "kind", f"scaled-{self.base.kind}")
        object.__setattr__(self, "breakpoint_ratios", self.base.breakpoint_ratios)
        object.__setattr__(self, "support", self.base.support)

    @property
    def p(self):  # type: ignore[override]
        return self.base.p

    @property
    def total_mass(self) -> float:
        return self.factor * self.base.total_mass

    def eval(self, n: int, t):
        return self.factor * self.base.eval(n, t)

    def sup_bound(self, n: int) -> float:
        return self.factor * self.base.sup_bound(n)

    def mass_below(self, n: int, c: float) -> float:
        return self.factor * self.base.mass_below(n, c)

    def mass_above(self, n: int, c: float) -> float:
        return self.factor * self.base.mass_above(n, c)

    def analytic_tail(self, n: int, delta: float) -> TailEstimate:
        est = self.base.analytic_tail(n, delta)
        return TailEstimate(self.factor * est.value, est.tag)

    def tail_bound_threshold(self, delta: float) -> int:
        return self.base.tail_bound_threshold(delta)

    def closed_window(self, n: int, a: float, b: float, s):
        closed = self.base.closed_window(n, a, b, s)
        return None if closed is None else self.factor * closed


@dataclass(frozen=True)
class LogUniformKernel(KernelFamily):
    """Uniform mass on |ln t| < w, independent of n: does not concentrate."""

    half_width: float = 2.0
    kind: str = "log-uniform"

    def __post_init__(self) -> None:
        if self.half_width <= 0.0:
            raise ValueError("half width must be positive")
        w = self.half_width
        object.__setattr__(self, "support", (math.exp(-w), math.exp(w)))
        object.__setattr__(self, "breakpoint_ratios", (math.exp(-w), math.exp(w)))

    def eval(self, n: int, t):
        _require_index(n)
        t = np.asarray(t, dtype=float)
        _require_positive(t)
        x = np.abs(np.log(t))
        out = np.where(x < self.half_width, 1.0 / (2.0 * self.half_width), 0.0)
        return out if out.ndim else float(out)

    def sup_bound(self, n: int) -> float:
        return 1.0 / (2.0 * self.half_width)

    def mass_below(self, n: int, c: float) -> float:
        _require_index(n)
        if c <= 0.0:
            return 0.0
        w = self.half_width
        return float(np.clip((math.log(c) + w) / (2.0 * w), 0.0, 1.0))

    def mass_above(self, n: int, c: float) -> float:
        return self.total_mass - self.mass_below(n, c)

    def analytic_tail(self, n: int, delta: float) -> TailEstimate:
        _require_index(n)
        if delta <= 1.0:
            raise ValueError("delta must exceed 1")
        return TailEstimate(2.0 * self.mass_above(n, delta), "exact")


def make_kernel(kind: str, p: Optional[int] = None) -> KernelFamily:
    """Kernel family by short name: moment, mgw, or mpc (with exponent p)."""
    if kind == "moment":
        return MomentKernel()
    if kind == "mgw":
        return GaussWeierstrassKernel()
    if kind == "mpc":
        return PoissonCauchyKernel(p=2 if p is None else p)
    raise ValueError(f"unknown kernel kind {kind!r}")


# -- quadrature-backed quantities -------------------------------------------


def _kernel_cfg(n: int, cfg: QuadratureConfig) -> QuadratureConfig:
    # features have log width ~ 1/n, so keep at least ~n panels per log unit
    return cfg.with_min_panels(min(n, 4096))


def _split_windows(lo: float, hi: float, points: Sequence[float]) -> list[LogInterval]:
    cuts = [lo] + sorted(p for p in set(points) if lo < p < hi) + [hi]
    return [LogInterval(u, v) for u, v in zip(cuts[:-1], cuts[1:])]


def _truncated_range(k: KernelFamily, cfg: QuadratureConfig) -> tuple[float, float]:
    r = cfg.max_log_halfwidth
    lo = max(math.exp(-r), k.support[0])
    hi = min(math.exp(r), k.support[1])
    return lo, hi


def normalization(k: KernelFamily, n: int, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Full Haar mass of L_n: quadrature inside the truncation radius plus
    the exact one-sided remainders beyond it."""
    _require_index(n)
    cfg_n = _kernel_cfg(n, cfg)
    lo, hi = _truncated_range(k, cfg)
    total = k.mass_below(n, lo) + k.mass_above(n, hi)
    if lo < hi:
        for w in _split_windows(lo, hi, k.breakpoint_ratios):
            total += integrate_haar(lambda t: k.eval(n, t), w, cfg_n)
    return total


def tail_mass(k: KernelFamily, n: int, delta: float) -> TailEstimate:
    """Analytic estimate (exact value or upper bound) of the mass of L_n
    outside [1/delta, delta]."""
    return k.analytic_tail(n, delta)


def tail_mass_numeric(
    k: KernelFamily, n: int, delta: float, cfg: QuadratureConfig = DEFAULT_CONFIG
) -> float:
    """Quadrature value of the mass of L_n outside [1/delta, delta]."""
    _require_index(n)
    if delta <= 1.0:
        raise ValueError("delta must exceed 1")
    cfg_n = _kernel_cfg(n, cfg)
    lo, hi = _truncated_range(k, cfg)

    c = 1.0 / delta
    if c <= lo:
        lower = k.mass_below(n, c)
    else:
        lower = k.mass_below(n, lo)
        for w in _split_windows(lo, c, k.breakpoint_ratios):
            lower += integrate_haar(lambda t: k.eval(n, t), w, cfg_n)

    if delta >= hi:
        upper = k.mass_above(n, delta)
    else:
        upper = k.mass_above(n, hi)
        for w in _split_windows(delta, hi, k.breakpoint_ratios):
            upper += integrate_haar(lambda t: k.eval(n, t), w, cfg_n)

    return lower + upper


def window_integral(
    k: KernelFamily,
    n: int,
    a: float,
    b: float,
    s: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """Integral of L_n(t/s) dt/t over the window [a, b]: the operator applied
    to the indicator of [a, b].  Uses the closed form when the family has one."""
    _require_index(n)
    if not (0.0 < a < b) or s <= 0.0:
        raise ValueError("need 0 < a < b and s > 0")
    closed = k.closed_window(n, a, b, s)
    if closed is not None:
        return float(closed)
    lo = max(a / s, k.support[0])
    hi = min(b / s, k.support[1])
    if lo >= hi:
        return 0.0
    cfg_n = _kernel_cfg(n, cfg)
    return sum(
        integrate_haar(lambda t: k.eval(n, t), w, cfg_n)
        for w in _split_windows(lo, hi, k.breakpoint_ratios)
    )


_BATCH = 4096


def window_integral_many(
    k: KernelFamily,
    n: int,
    a: float,
    b: float,
    s: np.ndarray,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Vectorized window_integral over an array of evaluation points."""
    _require_index(n)
    s = np.asarray(s, dtype=float)
    closed = k.closed_window(n, a, b, s)
    if closed is not None:
        return np.asarray(closed, dtype=float)
    if not k.breakpoint_ratios:
        ts, ws = haar_nodes(LogInterval(a, b), _kernel_cfg(n, cfg))
        out = np.empty_like(s)
        for start in range(0, s.size, _BATCH):
            block = s[start : start + _BATCH]
            out[start : start + _BATCH] = k.eval(n, ts[None, :] / block[:, None]) @ ws
        return out
    return np.asarray([window_integral(k, n, a, b, float(v), cfg) for v in s])


class WindowLqResult(NamedTuple):
    """L^q norms of the window response over nested truncations."""

    truncations: tuple[tuple[float, float], ...]
    norms: tuple[float, ...]
    cauchy_gap: float


def window_lq_diagnostic(
    k: KernelFamily,
    n: int,
    a: float,
    b: float,
    q: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    j_max: int = 8,
) -> WindowLqResult:
    """Lebesgue L^q norms of s -> window_integral(k, n, a, b, s) over the
    nested truncations [a e^-2 2^-j, b e^2 2^j], j = 0..j_max.

    The norm increments stabilize when the window response has summable
    tails; ``cauchy_gap`` is the final increment.  Integrals accumulate
    strip by strip so each region is quadratured once.
    """
    _require_index(n)
    if not (0.0 < a < b) or q < 1.0 or j_max < 1:
        raise ValueError("need 0 < a < b, q >= 1, j_max >= 1")
    cfg_n = _kernel_cfg(n, cfg)

    def strip(lo: float, hi: float) -> float:
        # Lebesgue ds = s * (ds/s), so weight the Haar nodes by s itself
        ss, ws = haar_nodes(LogInterval(lo, hi), cfg_n)
        vals = window_integral_many(k, n, a, b, ss, cfg)
        return float(np.dot(ws, np.abs(vals) ** q * ss))

    edges = [(a * math.exp(-2.0) * 2.0**-j, b * math.exp(2.0) * 2.0**j) for j in range(j_max + 1)]
    acc = strip(*edges[0])
    norms = [acc ** (1.0 / q)]
    for (plo, phi), (lo, hi) in zip(edges[:-1], edges[1:]):
        acc += strip(lo, plo) + strip(phi, hi)
        norms.append(acc ** (1.0 / q))
    return WindowLqResult(
        truncations=tuple(edges),
        norms=tuple(norms),
        cauchy_gap=norms[-1] - norms[-2],
    )


def mpc_tail_limit_check(p: int, delta: float, n_list: Sequence[int]) -> list[float]:
    """The sequence n * (pi - 2 arctan(n ln delta)), which increases to its
    limit 2 / ln delta; the Cauchy-type tail bound therefore decays like 1/n."""
    if not isinstance(p, int) or p < 2:
        raise ValueError("p must be an integer >= 2")
    if delta <= 1.0:
        raise ValueError("delta must exceed 1")
    for n in n_list:
        _require_index(n)
    return [2.0 * n * math.atan2(1.0, n * math.log(delta)) for n in n_list]
