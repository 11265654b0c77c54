"""Projections onto the hyperbola ||u||^2 - ||v||^2 = 2*gamma.

For queries with both slots nonzero the nearest point is unique and comes
from the multiplier equation (rootfind module).  Queries sitting on a
symmetry axis -- one slot zero -- have set-valued projections: the answer
is a sphere's worth of equidistant points, returned here as a compact
:class:`SphereFamily` descriptor rather than being enumerated.  Negative
levels reduce to positive ones by swapping the slots.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .rootfind import HParams, solve_lambda
from .space import Pair, as_point, check_gamma, SQRT2

# Relative cutoff for treating a slot as zero; the exact case split is a
# measure-zero event, so floating point needs a threshold.
DEG_TOL = 1e-12
# A generic multiplier this close to +-1 amplifies rounding in the final
# division; results are still returned but flagged.
ILL_COND_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Singleton:
    """A single-point projection, with branch diagnostics."""

    point: Pair
    case: str = "generic"
    multiplier: Optional[float] = None
    ill_conditioned: bool = False


@dataclass(frozen=True, eq=False)
class SphereFamily:
    """The set { (base_first + cf*w, base_second + cs*w) : ||w|| = radius }.

    w ranges over a sphere in the model space, so in R^n the family is an
    (n-1)-sphere of equidistant nearest points.  Members are materialized
    on demand via :meth:`member`; selection policy lives with the caller.
    """

    base_first: np.ndarray
    base_second: np.ndarray
    coeff_first: float
    coeff_second: float
    radius: float
    case: str = ""

    def __post_init__(self):
        object.__setattr__(self, "base_first", as_point(self.base_first))
        object.__setattr__(self, "base_second", as_point(self.base_second))
        if self.base_first.shape != self.base_second.shape:
            raise ValueError("family base slots must have equal dimension")
        object.__setattr__(self, "coeff_first", float(self.coeff_first))
        object.__setattr__(self, "coeff_second", float(self.coeff_second))
        object.__setattr__(self, "radius", float(self.radius))
        if not (self.radius >= 0.0 and math.isfinite(self.radius)):
            raise ValueError("radius must be a finite nonnegative real")

    @property
    def dim(self) -> int:
        return self.base_first.size

    def member(self, direction) -> Pair:
        """The family member with w = radius * direction/||direction||."""
        d = as_point(direction)
        if d.size != self.dim:
            raise ValueError("direction dimension mismatch")
        nd = float(np.linalg.norm(d))
        if not nd > 0.0:
            raise ValueError("direction must be nonzero")
        w = (self.radius / nd) * d
        return Pair(self.base_first + self.coeff_first * w,
                    self.base_second + self.coeff_second * w)

    def sample_members(self, count: int, rng: np.random.Generator) -> list[Pair]:
        """Members along `count` random directions (valid in any dimension)."""
        out = []
        while len(out) < count:
            d = rng.standard_normal(self.dim)
            if float(np.linalg.norm(d)) > 0.0:
                out.append(self.member(d))
        return out

    def direction_toward(self, z: Pair) -> Optional[np.ndarray]:
        """Direction whose member is nearest to z, or None if z is centered.

        Minimizing ||member(w) - z||^2 over ||w|| = radius maximizes
        <w, cf*(z1 - b1) + cs*(z2 - b2)>, so that combination is the
        optimal direction.
        """
        if z.dim != self.dim:
            raise ValueError("pair dimension mismatch")
        d = (self.coeff_first * (z.first - self.base_first)
             + self.coeff_second * (z.second - self.base_second))
        if not float(np.linalg.norm(d)) > 0.0:
            return None
        return d


ProjectionResult = Union[Singleton, SphereFamily]


def swap_result(r: ProjectionResult) -> ProjectionResult:
    """Apply (x, y) -> (y, x) to every member of a projection result."""
    if isinstance(r, Singleton):
        return Singleton(Pair(r.point.second, r.point.first), r.case,
                         r.multiplier, r.ill_conditioned)
    return SphereFamily(r.base_second, r.base_first, r.coeff_second,
                        r.coeff_first, r.radius, r.case)


def negate_second_result(r: ProjectionResult) -> ProjectionResult:
    """Apply (x, y) -> (x, -y) to every member of a projection result."""
    if isinstance(r, Singleton):
        return Singleton(Pair(r.point.first, -r.point.second), r.case,
                         r.multiplier, r.ill_conditioned)
    return SphereFamily(r.base_first, -r.base_second, r.coeff_first,
                        -r.coeff_second, r.radius, r.case)


def rotate_result(r: ProjectionResult, sign: int) -> ProjectionResult:
    """Rotate every member of a projection result by +-pi/4."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if isinstance(r, Singleton):
        from .space import rotate_quarter

        return Singleton(rotate_quarter(r.point, sign), r.case,
                         r.multiplier, r.ill_conditioned)
    bf, bs = r.base_first, r.base_second
    cf, cs = r.coeff_first, r.coeff_second
    if sign == 1:
        return SphereFamily((bf - bs) / SQRT2, (bf + bs) / SQRT2,
                            (cf - cs) / SQRT2, (cf + cs) / SQRT2,
                            r.radius, r.case)
    return SphereFamily((bf + bs) / SQRT2, (bs - bf) / SQRT2,
                        (cf + cs) / SQRT2, (cs - cf) / SQRT2,
                        r.radius, r.case)


def scale_result(r: ProjectionResult, s: float) -> ProjectionResult:
    """Scale every member of a projection result by s > 0."""
    s = float(s)
    if not (s > 0.0 and math.isfinite(s)):
        raise ValueError("scale factor must be a positive finite real")
    if isinstance(r, Singleton):
        return Singleton(Pair(s * r.point.first, s * r.point.second), r.case,
                         r.multiplier, r.ill_conditioned)
    return SphereFamily(s * r.base_first, s * r.base_second, r.coeff_first,
                        r.coeff_second, s * r.radius, r.case)


def hyperbola_residual(z: Pair, gamma: float) -> float:
    """Signed constraint defect ||u||^2 - ||v||^2 - 2*gamma."""
    u, v = z.first, z.second
    return float(np.dot(u, u) - np.dot(v, v) - 2.0 * gamma)


# Branch labels swap their slot orientation when a negative level is
# reduced by the slot swap.
_SWAP_CASE = {
    "generic": "generic",
    "origin": "origin",
    "first-zero": "second-zero",
    "second-zero-sphere": "first-zero-sphere",
    "second-zero-point": "first-zero-point",
}


def project_hgamma(u0, v0, gamma, tol: float | None = None,
                   deg_tol: float = DEG_TOL) -> ProjectionResult:
    """Project (u0, v0) onto { (u, v) : ||u||^2 - ||v||^2 = 2*gamma }.

    gamma > 0 branches:

    * both slots nonzero: unique point (u0/(1+lam), v0/(1-lam)) with lam
      the root of the multiplier equation at level gamma;
    * u0 = 0: sphere family (w, v0/2) with ||w||^2 = 2*gamma + ||v0||^2/4
      (also covers the all-zero query, by continuity in v0);
    * v0 = 0, ||u0|| >= 2*sqrt(2*gamma): sphere family (u0/2, w) with
      ||w||^2 = ||u0||^2/4 - 2*gamma;
    * v0 = 0, ||u0|| < 2*sqrt(2*gamma): the point (sqrt(2*gamma) *
      u0/||u0||, 0).  At the threshold the two formulas coincide and the
      sphere branch is used.

    gamma < 0 reduces to -gamma by swapping the slots on the way in and
    out.  A slot counts as zero when its norm is at most
    deg_tol * (1 + ||u0|| + ||v0||).
    """
    g = check_gamma(gamma)
    u = as_point(u0)
    v = as_point(v0)
    if u.shape != v.shape:
        raise ValueError("u0 and v0 must have equal dimension")
    if g < 0.0:
        res = project_hgamma(v, u, -g, tol=tol, deg_tol=deg_tol)
        res = swap_result(res)
        if isinstance(res, Singleton):
            return Singleton(res.point, _SWAP_CASE[res.case], res.multiplier,
                             res.ill_conditioned)
        return SphereFamily(res.base_first, res.base_second, res.coeff_first,
                            res.coeff_second, res.radius, _SWAP_CASE[res.case])

    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    scale = 1.0 + nu + nv
    zero = np.zeros_like(u)

    if nu <= deg_tol * scale:
        case = "origin" if nv <= deg_tol * scale else "first-zero"
        radius = math.sqrt(2.0 * g + nv * nv / 4.0)
        return SphereFamily(zero, v / 2.0, 1.0, 0.0, radius, case)

    # Slots more than ~8 orders of magnitude apart make q - |p| underflow;
    # such queries are indistinguishable from exactly degenerate ones in
    # doubles (the answers differ by far less than any resolvable error),
    # so route them to the closed-form branches as well.
    if nv <= deg_tol * scale or nv * nv <= 4.0 * np.finfo(float).eps * nu * nu:
        if nu >= 2.0 * math.sqrt(2.0 * g):
            radius = math.sqrt(max(0.0, nu * nu / 4.0 - 2.0 * g))
            return SphereFamily(u / 2.0, zero, 0.0, 1.0, radius,
                                "second-zero-sphere")
        point = Pair(math.sqrt(2.0 * g) * (u / nu), zero)
        return Singleton(point, "second-zero-point")
    if nu * nu <= 4.0 * np.finfo(float).eps * nv * nv:
        radius = math.sqrt(2.0 * g + nv * nv / 4.0)
        return SphereFamily(zero, v / 2.0, 1.0, 0.0, radius, "first-zero")

    root = solve_lambda(HParams.from_norms(nu * nu, nv * nv, g), tol=tol)
    lam = root.lam
    point = Pair(u / (1.0 + lam), v / (1.0 - lam))
    ill = (1.0 - abs(lam) < ILL_COND_TOL) or not root.met_tolerance
    return Singleton(point, "generic", lam, ill_conditioned=ill)


def project_h1(u0, v0, tol: float | None = None,
               deg_tol: float = DEG_TOL) -> ProjectionResult:
    """Project onto the unit-level hyperbola ||u||^2 - ||v||^2 = 2."""
    return project_hgamma(u0, v0, 1.0, tol=tol, deg_tol=deg_tol)
