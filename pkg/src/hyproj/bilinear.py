"""Projections onto the bilinear constraint set { (x, y) : <x, y> = gamma }.

A quarter turn carries this set onto the hyperbola at the same level, and
that conjugation is where the closed forms below come from; they are
implemented directly to avoid a round of rotations per call.  Inputs fall
into three regimes: off the diagonals the projection is a unique point
driven by the multiplier equation; on the anti-diagonal (x0 = -y0) it is
always a sphere family; on the diagonal (x0 = y0) it is a sphere family
for large queries and a single radial point for small ones.  Negative
levels reduce to positive ones via the second-slot sign flip.
"""
from __future__ import annotations

import enum
import math
from typing import Optional

import numpy as np

from .hyperbola import (DEG_TOL, ILL_COND_TOL, ProjectionResult, Singleton,
                        SphereFamily, negate_second_result)
from .rootfind import HParams, solve_lambda
from .space import Pair, as_point, check_gamma

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class Case(enum.Enum):
    """Input regime of a bilinear projection, in positive-level normal form."""

    GENERIC = "generic"
    ANTI_DIAGONAL = "anti-diagonal"
    DIAGONAL_LARGE = "diagonal-large"
    DIAGONAL_SMALL = "diagonal-small"


def bilinear_residual(z: Pair, gamma: float) -> float:
    """Signed constraint defect <x, y> - gamma."""
    return float(np.dot(z.first, z.second)) - gamma


def classify(x0, y0, gamma, deg_tol: float = DEG_TOL) -> Case:
    """Decide the input regime for (x0, y0) at the given level.

    For gamma < 0 the regime is that of (x0, -y0) at level -gamma, i.e.
    the roles of the two diagonals swap.  The anti-diagonal test runs
    first so the all-zero query lands in the always-sphere branch, whose
    formula is valid at x0 = 0.  Queries are diagonal only within
    deg_tol * (1 + ||x0|| + ||y0||).
    """
    g = check_gamma(gamma)
    x = as_point(x0)
    y = as_point(y0)
    if x.shape != y.shape:
        raise ValueError("x0 and y0 must have equal dimension")
    if g < 0.0:
        y = -y
        g = -g
    nx = float(np.linalg.norm(x))
    ny = float(np.linalg.norm(y))
    scale = 1.0 + nx + ny
    if float(np.linalg.norm(x + y)) <= deg_tol * scale:
        return Case.ANTI_DIAGONAL
    if float(np.linalg.norm(x - y)) <= deg_tol * scale:
        if nx >= 2.0 * math.sqrt(g):
            return Case.DIAGONAL_LARGE
        return Case.DIAGONAL_SMALL
    return Case.GENERIC


def project_bilinear(x0, y0, gamma, tol: float | None = None,
                     deg_tol: float = DEG_TOL) -> ProjectionResult:
    """Project (x0, y0) onto { (x, y) : <x, y> = gamma }.

    gamma > 0 branches:

    * generic (x0 != +-y0): unique point
      ((x0 - lam*y0)/(1 - lam^2), (y0 - lam*x0)/(1 - lam^2)) with lam the
      multiplier-equation root for p = 2 <x0, y0>,
      q = ||x0||^2 + ||y0||^2, level gamma;
    * x0 = -y0: sphere family (x0/2 + w/sqrt2, -x0/2 + w/sqrt2) with
      ||w||^2 = 2*gamma + ||x0||^2/2;
    * x0 = y0, ||x0|| >= 2*sqrt(gamma): sphere family
      (x0/2 - w/sqrt2, x0/2 + w/sqrt2) with ||w||^2 = ||x0||^2/2 - 2*gamma;
    * x0 = y0, 0 < ||x0|| < 2*sqrt(gamma): the point
      sqrt(gamma) * (x0/||x0||, x0/||x0||).

    gamma < 0 is handled by the sign-flip reduction: project (x0, -y0)
    at level -gamma and flip the second slot of every member on the way
    back.  The reported case refers to the positive-level normal form.
    """
    g = check_gamma(gamma)
    x = as_point(x0)
    y = as_point(y0)
    if x.shape != y.shape:
        raise ValueError("x0 and y0 must have equal dimension")
    if g < 0.0:
        return negate_second_result(
            project_bilinear(x, -y, -g, tol=tol, deg_tol=deg_tol))

    case = classify(x, y, g, deg_tol=deg_tol)
    nx = float(np.linalg.norm(x))

    if case is Case.GENERIC:
        # p = 2 <x, y> and q = ||x||^2 + ||y||^2, evaluated through the
        # diagonal-frame norms so q - |p| = min(||x+y||^2, ||x-y||^2) cannot
        # be lost to cancellation for nearly diagonal queries.
        s_plus = float(np.dot(x + y, x + y))
        s_minus = float(np.dot(x - y, x - y))
        eps4 = 4.0 * np.finfo(float).eps
        if s_minus <= eps4 * s_plus:
            # Beyond double resolution of the diagonal: fall through to the
            # closed-form diagonal branches.
            case = (Case.DIAGONAL_LARGE if nx >= 2.0 * math.sqrt(g)
                    else Case.DIAGONAL_SMALL)
        elif s_plus <= eps4 * s_minus:
            case = Case.ANTI_DIAGONAL

    if case is Case.GENERIC:
        # u_sq, v_sq are the squared norms of the rotated-frame slots
        # (x+y)/sqrt2 and (y-x)/sqrt2, so p = 2 <x, y> and
        # q = ||x||^2 + ||y||^2 as required.
        root = solve_lambda(HParams.from_norms(0.5 * s_plus, 0.5 * s_minus, g),
                            tol=tol)
        lam = root.lam
        d = (1.0 - lam) * (1.0 + lam)
        point = Pair((x - lam * y) / d, (y - lam * x) / d)
        ill = (1.0 - abs(lam) < ILL_COND_TOL) or not root.met_tolerance
        return Singleton(point, case.value, lam, ill_conditioned=ill)

    if case is Case.ANTI_DIAGONAL:
        radius = math.sqrt(2.0 * g + nx * nx / 2.0)
        return SphereFamily(x / 2.0, -x / 2.0, _INV_SQRT2, _INV_SQRT2,
                            radius, case.value)

    if case is Case.DIAGONAL_LARGE:
        radius = math.sqrt(max(0.0, nx * nx / 2.0 - 2.0 * g))
        return SphereFamily(x / 2.0, x / 2.0, -_INV_SQRT2, _INV_SQRT2,
                            radius, case.value)

    xhat = x / nx
    point = Pair(math.sqrt(g) * xhat, math.sqrt(g) * xhat)
    return Singleton(point, case.value)


def representative(result: ProjectionResult, hint=None) -> Pair:
    """Deterministically pick one member of a projection result.

    Singletons return their point.  For a sphere family the member is
    taken along the normalized hint when a nonzero hint is supplied, else
    along base_first, else base_second, else the first canonical basis
    vector, in that order.
    """
    if isinstance(result, Singleton):
        return result.point
    fam: SphereFamily = result
    d: Optional[np.ndarray] = None
    if hint is not None:
        h = as_point(hint)
        if h.size != fam.dim:
            raise ValueError("hint dimension mismatch")
        if float(np.linalg.norm(h)) > 0.0:
            d = h
    if d is None:
        for cand in (fam.base_first, fam.base_second):
            if float(np.linalg.norm(cand)) > 0.0:
                d = cand
                break
    if d is None:
        d = np.zeros(fam.dim)
        d[0] = 1.0
    if fam.radius == 0.0:
        return Pair(fam.base_first.copy(), fam.base_second.copy())
    return fam.member(d)
