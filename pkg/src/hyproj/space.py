"""Vectors, pairs, and the orthogonal transforms behind every reduction.

The model space is R^n with the standard dot product.  Constraint-set
elements are pairs (x, y) of equal-dimension vectors; the product space
carries the norm ||(x, y)||^2 = ||x||^2 + ||y||^2.  Three cheap orthogonal
maps -- the quarter-turn rotation, the slot swap, and the second-slot sign
flip -- move every projection problem into a normal form with a positive
level and a hyperbola-shaped constraint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SQRT2 = math.sqrt(2.0)


def as_point(x) -> np.ndarray:
    """Validate a vector: 1-D, length >= 1, all coordinates finite.

    Scalars are promoted to length-1 vectors.  Returns a float64 array.
    """
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if arr.ndim != 1:
        raise ValueError(f"a point must be 1-D, got shape {arr.shape}")
    if arr.size < 1:
        raise ValueError("a point needs at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


def check_gamma(value) -> float:
    """Validate the constraint level: finite and nonzero.

    The zero level degenerates to the 'cross' (union of the two coordinate
    subspaces), which has a different projection structure and is rejected
    everywhere in this library.
    """
    g = float(value)
    if not math.isfinite(g):
        raise ValueError("gamma must be finite")
    if g == 0.0:
        raise ValueError(
            "gamma must be nonzero: the gamma=0 set degenerates to the "
            "'cross', which this library does not handle"
        )
    return g


def norm(x) -> float:
    return float(np.linalg.norm(as_point(x)))


def inner(x, y) -> float:
    """Standard dot product of two equal-dimension vectors."""
    xa, ya = as_point(x), as_point(y)
    if xa.shape != ya.shape:
        raise ValueError(
            f"dimension mismatch: {xa.size} vs {ya.size}"
        )
    return float(np.dot(xa, ya))


@dataclass(frozen=True, eq=False)
class Pair:
    """An element (first, second) of the product space R^n x R^n."""

    first: np.ndarray
    second: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "first", as_point(self.first))
        object.__setattr__(self, "second", as_point(self.second))
        if self.first.shape != self.second.shape:
            raise ValueError(
                "pair slots must have equal dimension, got "
                f"{self.first.size} and {self.second.size}"
            )

    @property
    def dim(self) -> int:
        return self.first.size

    def stacked(self) -> np.ndarray:
        """Both slots concatenated into a single vector of length 2n."""
        return np.concatenate([self.first, self.second])

    @classmethod
    def from_stacked(cls, coords) -> "Pair":
        arr = as_point(coords)
        if arr.size % 2:
            raise ValueError("stacked coordinates must have even length")
        n = arr.size // 2
        return cls(arr[:n], arr[n:])

    def norm(self) -> float:
        return math.hypot(
            float(np.linalg.norm(self.first)), float(np.linalg.norm(self.second))
        )

    def __add__(self, other: "Pair") -> "Pair":
        return Pair(self.first + other.first, self.second + other.second)

    def __sub__(self, other: "Pair") -> "Pair":
        return Pair(self.first - other.first, self.second - other.second)

    def __rmul__(self, s) -> "Pair":
        return Pair(s * self.first, s * self.second)

    def __neg__(self) -> "Pair":
        return Pair(-self.first, -self.second)


def dist_sq(a: Pair, b: Pair) -> float:
    """Squared product-space distance; the projection objective."""
    df = a.first - b.first
    ds = a.second - b.second
    return float(np.dot(df, df) + np.dot(ds, ds))


def rotate_quarter(z: Pair, sign: int) -> Pair:
    """Rotate a pair by +pi/4 (sign=+1) or -pi/4 (sign=-1).

    sign=+1 maps (x, y) to ((x - y)/sqrt2, (x + y)/sqrt2); sign=-1 maps
    (x, y) to ((x + y)/sqrt2, (y - x)/sqrt2).  The two are mutually
    inverse and both preserve the stacked norm.  The -pi/4 turn carries
    the inner-product level set onto a hyperbola:

        ||(x + y)/sqrt2||^2 - ||(y - x)/sqrt2||^2 = 2 <x, y>.
    """
    if sign == 1:
        return Pair((z.first - z.second) / SQRT2, (z.first + z.second) / SQRT2)
    if sign == -1:
        return Pair((z.first + z.second) / SQRT2, (z.second - z.first) / SQRT2)
    raise ValueError("sign must be +1 or -1")


def swap(z: Pair) -> Pair:
    """(x, y) -> (y, x); an involution."""
    return Pair(z.second, z.first)


def negate_second(z: Pair) -> Pair:
    """(x, y) -> (x, -y); an involution that flips the inner product sign."""
    return Pair(z.first, -z.second)


def scale_pair(z: Pair, s: float) -> Pair:
    """Scale both slots by s > 0."""
    s = float(s)
    if not (s > 0.0) or not math.isfinite(s):
        raise ValueError("scale factor must be a positive finite real")
    return Pair(s * z.first, s * z.second)
