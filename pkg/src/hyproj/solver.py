"""Projection-driven feasibility between the bilinear set and a simple aux set.

Two fixed-point iterations built purely from projections: the method of
alternating projections (MAP) and Douglas-Rachford (DR).  The bilinear
set is nonconvex, so neither carries a global convergence theorem; traces
record per-iteration residuals so behaviour stays observable.  Set-valued
projection steps are disambiguated by the deterministic representative
rule, hinted with the point being projected so the selection is the
nearest member and iterations remain continuous where possible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .bilinear import bilinear_residual, project_bilinear, representative
from .hyperbola import Singleton
from .space import Pair, check_gamma

# Abort threshold: nonconvex DR can wander off to infinity.
_DIVERGENCE_FACTOR = 1e6


@dataclass(frozen=True, eq=False)
class FixedCoordinates:
    """Affine aux set: the masked stacked coordinates are pinned to values.

    mask and values run over the stacked pair vector (first slot then
    second), so both must have length 2n.
    """

    mask: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=bool)
        values = np.asarray(self.values, dtype=float)
        if mask.ndim != 1 or values.ndim != 1 or mask.size != values.size:
            raise ValueError("mask and values must be 1-D of equal length")
        if mask.size == 0 or mask.size % 2:
            raise ValueError("mask length must be a positive even number")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True, eq=False)
class Ball:
    """Closed ball in the product space."""

    center: Pair
    radius: float

    def __post_init__(self):
        if not isinstance(self.center, Pair):
            raise ValueError("center must be a Pair")
        radius = float(self.radius)
        if not (radius > 0.0 and math.isfinite(radius)):
            raise ValueError("radius must be a positive finite real")
        object.__setattr__(self, "radius", radius)


AuxSet = Union[FixedCoordinates, Ball]


def _check_aux_dim(z: Pair, s: AuxSet) -> None:
    if isinstance(s, FixedCoordinates):
        if s.mask.size != 2 * z.dim:
            raise ValueError("aux mask length does not match pair dimension")
    else:
        if s.center.dim != z.dim:
            raise ValueError("aux ball dimension does not match pair dimension")


def project_aux(z: Pair, s: AuxSet) -> Pair:
    """Orthogonal projection onto the aux set (both kinds are convex)."""
    _check_aux_dim(z, s)
    if isinstance(s, FixedCoordinates):
        stacked = z.stacked()
        out = np.where(s.mask, s.values, stacked)
        return Pair.from_stacked(out)
    d = z - s.center
    nd = d.norm()
    if nd <= s.radius:
        return z
    return s.center + (s.radius / nd) * d


def aux_distance(z: Pair, s: AuxSet) -> float:
    """Euclidean distance from z to the aux set."""
    _check_aux_dim(z, s)
    if isinstance(s, FixedCoordinates):
        diff = (z.stacked() - s.values)[s.mask]
        return float(np.linalg.norm(diff))
    return max(0.0, (z - s.center).norm() - s.radius)


@dataclass
class SolverTrace:
    """History of one feasibility run.

    iterates[k] is the point whose residual pair is residuals[k-1] (the
    starting point is iterates[0]); for MAP these live in the aux set,
    for DR they are the shadow points on the bilinear set.  iterations
    equals the number of update steps, so len(residuals) == iterations
    and len(iterates) == iterations + 1.  solution is the reported final
    point.
    """

    iterates: list[Pair]
    residuals: list[tuple[float, float]]
    converged: bool
    iterations: int
    solution: Pair


def _select(result, z: Pair) -> Pair:
    if isinstance(result, Singleton):
        return result.point
    return representative(result, result.direction_toward(z))


def _residual_pair(z: Pair, gamma: float, s: AuxSet) -> tuple[float, float]:
    return abs(bilinear_residual(z, gamma)), aux_distance(z, s)


def _validate_run(z0: Pair, s: AuxSet, max_iter: int, eps: float) -> None:
    if not isinstance(z0, Pair):
        raise ValueError("z0 must be a Pair")
    _check_aux_dim(z0, s)
    if int(max_iter) < 1:
        raise ValueError("max_iter must be at least 1")
    if not (float(eps) > 0.0):
        raise ValueError("eps must be positive")


def map_solve(z0: Pair, gamma, s: AuxSet, max_iter: int = 200,
              eps: float = 1e-6, tol: float | None = None,
              deg_tol: float = 1e-12) -> SolverTrace:
    """Alternating projections: z <- P_aux(P_bilinear(z)).

    Residuals are measured at the aux-side iterates; convergence means
    both the constraint defect |<x, y> - gamma| and the aux distance fall
    to eps or below.  Stops early on convergence or when the iterate norm
    exceeds 1e6 * (1 + ||z0||).
    """
    g = check_gamma(gamma)
    _validate_run(z0, s, max_iter, eps)
    z = z0
    iterates = [z]
    residuals: list[tuple[float, float]] = []
    r = _residual_pair(z, g, s)
    if max(r) <= eps:
        return SolverTrace(iterates, residuals, True, 0, z)
    bound = _DIVERGENCE_FACTOR * (1.0 + z0.norm())
    converged = False
    for _ in range(int(max_iter)):
        proj = project_bilinear(z.first, z.second, g, tol=tol, deg_tol=deg_tol)
        z = project_aux(_select(proj, z), s)
        r = _residual_pair(z, g, s)
        iterates.append(z)
        residuals.append(r)
        if max(r) <= eps:
            converged = True
            break
        if z.norm() > bound:
            break
    return SolverTrace(iterates, residuals, converged, len(residuals), z)


def dr_solve(z0: Pair, gamma, s: AuxSet, max_iter: int = 500,
             eps: float = 1e-6, tol: float | None = None,
             deg_tol: float = 1e-12) -> SolverTrace:
    """Douglas-Rachford: z <- z + P_aux(2 P_bilinear(z) - z) - P_bilinear(z).

    The reported solution is the shadow point P_bilinear(z), which sits on
    the constraint set; convergence is judged by its residual pair, so in
    practice the aux distance is the binding criterion.  Same guards and
    trace conventions as map_solve.
    """
    g = check_gamma(gamma)
    _validate_run(z0, s, max_iter, eps)
    w = z0

    def shadow(wk: Pair) -> Pair:
        proj = project_bilinear(wk.first, wk.second, g, tol=tol,
                                deg_tol=deg_tol)
        return _select(proj, wk)

    p = shadow(w)
    iterates = [p]
    residuals: list[tuple[float, float]] = []
    r = _residual_pair(p, g, s)
    if max(r) <= eps:
        return SolverTrace(iterates, residuals, True, 0, p)
    bound = _DIVERGENCE_FACTOR * (1.0 + z0.norm())
    converged = False
    for _ in range(int(max_iter)):
        w = w + project_aux(2.0 * p - w, s) - p
        p = shadow(w)
        r = _residual_pair(p, g, s)
        iterates.append(p)
        residuals.append(r)
        if max(r) <= eps:
            converged = True
            break
        if w.norm() > bound:
            break
    return SolverTrace(iterates, residuals, converged, len(residuals), p)
