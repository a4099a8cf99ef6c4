"""Quadrature for the multiplicative Haar measure dt/t on (0, inf).

Integrals are transformed to the log variable, where dt/t becomes Lebesgue
measure, and evaluated with composite Gauss-Legendre panels of fixed density
per unit of log length.  Integrands must accept numpy arrays of abscissas and
return arrays of the same shape; non-finite values abort the computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .lattice import LatticeValue


class NumericError(RuntimeError):
    """Raised when an integrand produces non-finite values."""


@dataclass(frozen=True)
class QuadratureConfig:
    """Resolution and truncation parameters for Haar-measure quadrature."""

    panels_per_unit_log: int = 64
    nodes_per_panel: int = 8
    abs_tol: float = 1e-10
    max_log_halfwidth: float = 40.0

    def __post_init__(self) -> None:
        if self.panels_per_unit_log < 1 or self.nodes_per_panel < 2:
            raise ValueError("quadrature resolution out of range")
        if self.abs_tol <= 0.0 or self.max_log_halfwidth <= 0.0:
            raise ValueError("tolerances must be positive")

    def with_min_panels(self, per_unit: float) -> "QuadratureConfig":
        """Copy with panel density raised to at least ``per_unit``."""
        need = int(math.ceil(per_unit))
        if need <= self.panels_per_unit_log:
            return self
        return replace(self, panels_per_unit_log=need)

    def doubled(self) -> "QuadratureConfig":
        """Copy at twice the panel density, for convergence cross-checks."""
        return replace(self, panels_per_unit_log=2 * self.panels_per_unit_log)


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class LogInterval:
    """An interval (lo, hi) on the positive half-line, 0 < lo < hi."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (0.0 < self.lo < self.hi < math.inf):
            raise ValueError(f"need 0 < lo < hi, got ({self.lo}, {self.hi})")

    @property
    def log_length(self) -> float:
        return math.log(self.hi) - math.log(self.lo)


def d_ln(t1: float, t2: float) -> float:
    """Distance in the log metric, |ln t1 - ln t2|."""
    if t1 <= 0.0 or t2 <= 0.0:
        raise ValueError("log metric requires positive arguments")
    return abs(math.log(t1) - math.log(t2))


@lru_cache(maxsize=8)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _panel_nodes(x_lo: float, x_hi: float, cfg: QuadratureConfig) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on [x_lo, x_hi]."""
    length = x_hi - x_lo
    n_panels = max(1, int(math.ceil(length * cfg.panels_per_unit_log)))
    edges = np.linspace(x_lo, x_hi, n_panels + 1)
    ref_x, ref_w = _gauss_legendre(cfg.nodes_per_panel)
    half = np.diff(edges) / 2.0
    mid = (edges[:-1] + edges[1:]) / 2.0
    xs = (mid[:, None] + half[:, None] * ref_x[None, :]).ravel()
    ws = (half[:, None] * ref_w[None, :]).ravel()
    return xs, ws


def haar_nodes(window: LogInterval, cfg: QuadratureConfig = DEFAULT_CONFIG) -> tuple[np.ndarray, np.ndarray]:
    """Abscissas t and weights w with  integral g dt/t  ~=  sum w * g(t)."""
    xs, ws = _panel_nodes(math.log(window.lo), math.log(window.hi), cfg)
    return np.exp(xs), ws


def haar_nodes_union(
    windows: Sequence[LogInterval], cfg: QuadratureConfig = DEFAULT_CONFIG
) -> tuple[np.ndarray, np.ndarray]:
    """Concatenated nodes over disjoint windows (panel edges land on seams)."""
    parts = [haar_nodes(w, cfg) for w in windows]
    return (
        np.concatenate([t for t, _ in parts]),
        np.concatenate([w for _, w in parts]),
    )


def integrate_haar(
    g: Callable[[np.ndarray], np.ndarray],
    window: LogInterval,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """Integral of g over ``window`` against dt/t."""
    ts, ws = haar_nodes(window, cfg)
    vals = np.asarray(g(ts), dtype=float)
    if vals.shape != ts.shape:
        raise NumericError("integrand must return one value per abscissa")
    if not np.all(np.isfinite(vals)):
        raise NumericError("integrand produced non-finite values")
    return float(np.dot(ws, vals))


def integrate_haar_lattice(
    g: Callable[[float], LatticeValue],
    window: LogInterval,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> LatticeValue:
    """Coordinatewise Haar integral of a lattice-valued integrand."""
    ts, ws = haar_nodes(window, cfg)
    vals = [g(float(t)) for t in ts]
    size = max(v.size for v in vals)
    if size == 1:
        acc = np.asarray([v.data for v in vals], dtype=float)
        if not np.all(np.isfinite(acc)):
            raise NumericError("integrand produced non-finite values")
        return LatticeValue.scalar(float(np.dot(ws, acc)))
    stacked = np.vstack([v.as_array(size) for v in vals])
    if not np.all(np.isfinite(stacked)):
        raise NumericError("integrand produced non-finite values")
    return LatticeValue.grid(ws @ stacked)
