"""Pointwise maps applied to signal values under the operator integral.

Two built-in families, both Lipschitz with the identity comparator:

* identity      u -> u
* saturating    u -> n u |u| / (n |u| + 1), which compresses large values
                but deviates from the identity by at most 1/n everywhere

The deviation bound is what drives operator convergence: it is a scalar
rate sigma_n times a fixed order unit, and sigma_n decreases to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .lattice import (
    ONES,
    LatticeValue,
    OrderUnit,
    lat_abs,
    lat_leq,
    lat_linear,
)
from .kernels import _require_index

ArrayOrFloat = Union[float, np.ndarray]


@dataclass(frozen=True)
class Comparator:
    """Concave gauge psi_n used on the right side of the Lipschitz estimate.

    The default is the identity in its second argument, matching plain
    Lipschitz continuity; a custom gauge can be supplied as a callable.
    """

    kind: str = "identity"
    fn: Optional[Callable[[int, ArrayOrFloat], ArrayOrFloat]] = None

    def apply(self, n: int, x: ArrayOrFloat) -> ArrayOrFloat:
        if self.fn is None:
            return x
        return self.fn(n, x)


@dataclass(frozen=True)
class PointwiseMap:
    """A family u -> Y_n(u), acting coordinatewise on lattice values."""

    kind: str  # "identity" or "saturating"
    comparator: Comparator = field(default_factory=Comparator)
    # whether the deviation rate sigma_n decreases to zero (true for built-ins)
    deviation_vanishes: bool = True

    def __post_init__(self) -> None:
        if self.kind not in ("identity", "saturating"):
            raise ValueError(f"unknown pointwise map kind {self.kind!r}")

    def apply_array(self, n: int, u: np.ndarray) -> np.ndarray:
        _require_index(n)
        if self.kind == "identity":
            return np.asarray(u, dtype=float)
        u = np.asarray(u, dtype=float)
        au = np.abs(u)
        return n * u * au / (n * au + 1.0)

    def apply(self, n: int, u: LatticeValue) -> LatticeValue:
        if u.is_scalar:
            return LatticeValue.scalar(float(self.apply_array(n, np.asarray(u.data))))
        return LatticeValue.grid(self.apply_array(n, u.data))

    def deviation_bound(self, n: int) -> tuple[float, OrderUnit]:
        """Rate sigma_n and order unit v with |Y_n(u) - u| <= sigma_n v."""
        _require_index(n)
        if self.kind == "identity":
            return 0.0, ONES
        return 1.0 / n, ONES


def identity_map() -> PointwiseMap:
    return PointwiseMap(kind="identity")


def saturating_map() -> PointwiseMap:
    return PointwiseMap(kind="saturating")


def make_map(kind: str) -> PointwiseMap:
    return PointwiseMap(kind=kind)


def apply_map(m: PointwiseMap, n: int, u: LatticeValue) -> LatticeValue:
    return m.apply(n, u)


def deviation(m: PointwiseMap, n: int, u: LatticeValue) -> LatticeValue:
    """|Y_n(u) - u|, the pointwise distance from the identity."""
    return lat_abs(lat_linear(1.0, m.apply(n, u), -1.0, u))


def lipschitz_check(
    m: PointwiseMap,
    n: int,
    u: LatticeValue,
    v: LatticeValue,
    tol: float = 1e-12,
) -> bool:
    """Whether |Y_n(u) - Y_n(v)| <= psi_n(|u - v|) + tol coordinatewise."""
    lhs = lat_abs(lat_linear(1.0, m.apply(n, u), -1.0, m.apply(n, v)))
    gap = lat_abs(lat_linear(1.0, u, -1.0, v))
    if m.comparator.fn is None:
        rhs = gap
    else:
        if gap.is_scalar:
            rhs = LatticeValue.scalar(float(m.comparator.apply(n, gap.data)))
        else:
            rhs = LatticeValue.grid(np.asarray(m.comparator.apply(n, gap.data)))
    return lat_leq(lhs, rhs, tol=tol)
