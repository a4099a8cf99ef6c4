"""Vector-lattice values: scalars and sampled functions with order operations.

Two concrete realizations of a lattice of values are supported.  A *scalar*
is an ordinary real number.  A *grid* value holds samples of a continuous
function on [0, 1] over a uniform grid (default ``DEFAULT_GRID_SIZE`` points);
order operations act coordinatewise and norms are discretized with the
trapezoid rule.  A scalar combines with a grid by promotion to the constant
function; two grids must have identical sample counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

DEFAULT_GRID_SIZE = 256

ArrayLike = Union[float, int, np.ndarray]


class ShapeMismatchError(ValueError):
    """Raised when two grid values of different sample counts are combined."""


@dataclass(frozen=True)
class LatticeValue:
    """A scalar or a sampled function on [0, 1], closed under lattice operations."""

    data: Union[float, np.ndarray]

    def __post_init__(self) -> None:
        if isinstance(self.data, np.ndarray):
            arr = np.asarray(self.data, dtype=float)
            if arr.ndim != 1 or arr.size < 2:
                raise ValueError("grid values must be 1-d with at least 2 samples")
            if not np.all(np.isfinite(arr)):
                raise ValueError("grid values must be finite")
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, "data", arr)
        else:
            v = float(self.data)
            if not math.isfinite(v):
                raise ValueError("scalar values must be finite")
            object.__setattr__(self, "data", v)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def scalar(v: float) -> "LatticeValue":
        return LatticeValue(float(v))

    @staticmethod
    def grid(samples: ArrayLike) -> "LatticeValue":
        return LatticeValue(np.asarray(samples, dtype=float))

    @staticmethod
    def from_function(fn, size: int = DEFAULT_GRID_SIZE) -> "LatticeValue":
        """Sample ``fn`` on the uniform grid of [0, 1]."""
        xs = np.linspace(0.0, 1.0, size)
        return LatticeValue.grid(np.asarray([fn(x) for x in xs], dtype=float))

    # -- introspection ------------------------------------------------------

    @property
    def is_scalar(self) -> bool:
        return not isinstance(self.data, np.ndarray)

    @property
    def size(self) -> int:
        return 1 if self.is_scalar else int(self.data.size)

    def as_array(self, size: int) -> np.ndarray:
        """Samples as an array of length ``size``, promoting scalars."""
        if self.is_scalar:
            return np.full(size, self.data)
        if self.data.size != size:
            raise ShapeMismatchError(
                f"grid size mismatch: {self.data.size} vs {size}"
            )
        return self.data

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatticeValue):
            return NotImplemented
        if self.is_scalar != other.is_scalar:
            return False
        if self.is_scalar:
            return self.data == other.data
        return self.data.size == other.data.size and bool(
            np.all(self.data == other.data)
        )


def _aligned(x: LatticeValue, y: LatticeValue) -> tuple[ArrayLike, ArrayLike, bool]:
    """Common representation of two values under the promotion rule."""
    if x.is_scalar and y.is_scalar:
        return x.data, y.data, True
    size = y.size if x.is_scalar else x.size
    return x.as_array(size), y.as_array(size), False


def _wrap(data: ArrayLike, scalar: bool) -> LatticeValue:
    return LatticeValue(float(data)) if scalar else LatticeValue.grid(data)


@dataclass(frozen=True)
class OrderUnit:
    """A strictly positive lattice value, used to scale deviation bounds."""

    unit: LatticeValue

    def __post_init__(self) -> None:
        u = self.unit
        positive = u.data > 0.0 if u.is_scalar else bool(np.all(u.data > 0.0))
        if not positive:
            raise ValueError("order unit must be strictly positive")


ONES = OrderUnit(LatticeValue.scalar(1.0))


# -- lattice operations -----------------------------------------------------


def lat_abs(x: LatticeValue) -> LatticeValue:
    return _wrap(abs(x.data) if x.is_scalar else np.abs(x.data), x.is_scalar)


def lat_sup(x: LatticeValue, y: LatticeValue) -> LatticeValue:
    a, b, scal = _aligned(x, y)
    return _wrap(max(a, b) if scal else np.maximum(a, b), scal)


def lat_inf(x: LatticeValue, y: LatticeValue) -> LatticeValue:
    a, b, scal = _aligned(x, y)
    return _wrap(min(a, b) if scal else np.minimum(a, b), scal)


def lat_leq(x: LatticeValue, y: LatticeValue, tol: float = 0.0) -> bool:
    """Coordinatewise order x <= y, with an absolute slack of ``tol``."""
    a, b, scal = _aligned(x, y)
    if scal:
        return a <= b + tol
    return bool(np.all(a <= b + tol))


def lat_linear(a: float, x: LatticeValue, b: float, y: LatticeValue) -> LatticeValue:
    """The combination a*x + b*y."""
    u, v, scal = _aligned(x, y)
    return _wrap(a * u + b * v, scal)


def lat_scale(a: float, x: LatticeValue) -> LatticeValue:
    return _wrap(a * x.data if x.is_scalar else a * x.data, x.is_scalar)


def lat_pnorm(x: LatticeValue, p: float) -> float:
    """L^p norm; grids integrate |x|^p over [0, 1] by the trapezoid rule."""
    if p != math.inf and p < 1.0:
        raise ValueError("p must be >= 1 or inf")
    if x.is_scalar:
        return abs(x.data)
    samples = np.abs(x.data)
    if p == math.inf:
        return float(np.max(samples))
    h = 1.0 / (samples.size - 1)
    return float(np.trapezoid(samples**p, dx=h) ** (1.0 / p))


def ones_like(x: LatticeValue) -> LatticeValue:
    """The constant-one value with the shape of ``x``."""
    if x.is_scalar:
        return LatticeValue.scalar(1.0)
    return LatticeValue.grid(np.ones(x.size))
