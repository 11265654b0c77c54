"""Scalar multiplier equation for the generic projection branch.

Stationarity of the nearest-point problem on the hyperbola
||u||^2 - ||v||^2 = 2c couples the multiplier lam to the data (u0, v0)
through (1 + lam) u = u0 and (1 - lam) v = v0.  Substituting back into the
constraint gives a single scalar equation on ]-1, 1[:

    H(lam) = ((lam^2 + 1) p - 2 lam q) / (2 (1 - lam^2)^2) - c,

with p = ||u0||^2 - ||v0||^2 and q = ||u0||^2 + ||v0||^2.  Whenever both
reduced inputs are nonzero (q > |p|), H is strictly decreasing, blows up
to +inf at -1 and -inf at +1, and therefore has exactly one root; that
root is the multiplier of the nearest point.  The solver below runs
Newton steps inside a maintained sign-change bracket and falls back to
bisection whenever a step leaves the bracket or fails to make progress.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


class ConvergenceError(RuntimeError):
    """Root solve exhausted its iteration budget without meeting tolerances."""


@dataclass(frozen=True)
class HParams:
    """Data (p, q, c) of the multiplier equation.

    q > |p| encodes that both reduced inputs are nonzero; c > 0 is the
    normal-form level (negative-level problems are mapped here by the
    swap / sign-flip reductions before solving).

    u_sq and v_sq are the squared norms of the two reduced inputs, i.e.
    (q + p)/2 and (q - p)/2.  When a caller knows them it should build
    the params with :meth:`from_norms`: going through (p, q) rounds away
    a slot norm that is many orders of magnitude below the other, which
    visibly corrupts the root for nearly degenerate data.
    """

    p: float
    q: float
    c: float
    u_sq: float | None = None
    v_sq: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "q", float(self.q))
        object.__setattr__(self, "c", float(self.c))
        if not (math.isfinite(self.p) and math.isfinite(self.q) and math.isfinite(self.c)):
            raise ValueError("p, q, c must be finite")
        if self.q <= 0.0:
            raise ValueError("q must be positive")
        if self.q <= abs(self.p):
            raise ValueError("q must exceed |p| (both reduced inputs nonzero)")
        if self.c <= 0.0:
            raise ValueError("level c must be positive; reduce negative levels first")
        # Exact for nearby doubles, so reconstruction loses nothing beyond
        # what forming (p, q) already lost.
        if self.u_sq is None:
            object.__setattr__(self, "u_sq", 0.5 * (self.q + self.p))
        else:
            object.__setattr__(self, "u_sq", float(self.u_sq))
        if self.v_sq is None:
            object.__setattr__(self, "v_sq", 0.5 * (self.q - self.p))
        else:
            object.__setattr__(self, "v_sq", float(self.v_sq))
        if not (self.u_sq > 0.0 and self.v_sq > 0.0):
            raise ValueError("both reduced squared norms must be positive")

    @classmethod
    def from_norms(cls, u_sq: float, v_sq: float, c: float) -> "HParams":
        """Build params from the squared norms of the reduced inputs."""
        u_sq = float(u_sq)
        v_sq = float(v_sq)
        return cls(u_sq - v_sq, u_sq + v_sq, c, u_sq, v_sq)


@dataclass(frozen=True)
class RootResult:
    """Root of H with diagnostics.

    lam lies in the open interval ]-1, 1[ and, for inputs away from the
    degenerate boundary q = |p|, satisfies |residual| <= 1e-12 * (1 + q)
    (or the caller-supplied tolerance); met_tolerance records whether that
    was actually achieved, since roots pushed against the poles can sit
    where double precision cannot realize it.  bracket_width is the final
    width of the sign-change bracket, which always contains the true root.
    """

    lam: float
    residual: float
    iterations: int
    bracket_width: float
    met_tolerance: bool = True


def eval_h(lam: float, params: HParams) -> float:
    """Evaluate H(lam) = ((lam^2+1) p - 2 lam q) / (2 (1-lam^2)^2) - c.

    Computed in the algebraically identical split form
    u_sq/(2(1+lam)^2) - v_sq/(2(1-lam)^2) - c, which avoids the
    catastrophic cancellation the textbook numerator suffers from when
    p ~ q and lam ~ 1, and so stays accurate near the poles.
    """
    lam = float(lam)
    if not abs(lam) < 1.0:
        raise ValueError("lam must satisfy |lam| < 1 (poles at the endpoints)")
    op = 1.0 + lam
    om = 1.0 - lam
    return params.u_sq / (2.0 * op * op) - params.v_sq / (2.0 * om * om) - params.c


def eval_h_prime(lam: float, params: HParams) -> float:
    """Evaluate H'(lam) = (p lam (lam^2+3) - q (1+3 lam^2)) / (1-lam^2)^3.

    Computed in the split form -u_sq/(1+lam)^3 - v_sq/(1-lam)^3, a sum of
    two negative terms, so the sign is exact and there is no cancellation.
    """
    lam = float(lam)
    if not abs(lam) < 1.0:
        raise ValueError("lam must satisfy |lam| < 1 (poles at the endpoints)")
    op = 1.0 + lam
    om = 1.0 - lam
    return -params.u_sq / (op * op * op) - params.v_sq / (om * om * om)


DEFAULT_MAX_ITER = 200
# Absolute bracket-width target; lam lives in ]-1,1[ so no q scaling.
_WIDTH_TOL = 1e-12
_BRACKET_DELTA = 1e-12


def _default_tols(params: HParams, tol):
    if tol is not None:
        tol = float(tol)
        if not (tol > 0.0):
            raise ValueError("tol must be positive")
        return tol, tol
    return 1e-12 * (1.0 + params.q), _WIDTH_TOL


def _initial_bracket(params: HParams):
    """Shrink away from the poles until H is finite at both endpoints."""
    delta = _BRACKET_DELTA
    while delta < 1e-3:
        lo, hi = -1.0 + delta, 1.0 - delta
        flo, fhi = eval_h(lo, params), eval_h(hi, params)
        if math.isfinite(flo) and math.isfinite(fhi):
            if flo > 0.0 > fhi:
                return lo, hi, flo, fhi
            raise ConvergenceError(
                "no sign change on the working interval; the root sits within "
                f"{delta:g} of an endpoint (numerically degenerate input)"
            )
        delta *= 10.0
    raise ConvergenceError("H overflows everywhere near the interval endpoints")


def solve_lambda(params: HParams, tol: float | None = None,
                 max_iter: int = DEFAULT_MAX_ITER) -> RootResult:
    """Find the unique root of H in ]-1, 1[.

    Newton iterations run inside a sign-change bracket; any step that
    leaves the bracket, repeats a point, or follows another Newton step
    while the bracket is still wide is replaced by a bisection step, so
    the bracket width halves at least every other iteration.  Success
    requires both |H(lam)| <= residual tolerance (default 1e-12 * (1+q))
    and bracket width <= 1e-12; a caller-supplied tol replaces both.

    For near-degenerate data (q - |p| tiny) the root is pushed against an
    endpoint where double precision cannot realize the residual
    tolerance.  Once the bracket has collapsed to adjacent floats the
    best point found is returned with its achieved residual recorded
    rather than raising, since no further progress is representable.
    """
    rtol, wtol = _default_tols(params, tol)
    lo, hi, flo, fhi = _initial_bracket(params)

    # Cheap start heuristic: H(0) = p/2 - c suggests a root near p/(2q).
    x = min(max(params.p / (2.0 * params.q), lo), hi)
    fx = eval_h(x, params)
    iterations = 0
    newton_last = False

    def _best():
        # All three candidates lie in [lo, hi], hence within one bracket
        # width of the true root.
        cands = [(abs(flo), lo, flo), (abs(fhi), hi, fhi), (abs(fx), x, fx)]
        _, blam, bres = min(cands, key=lambda t: t[0])
        return blam, bres

    while iterations < max_iter:
        iterations += 1
        if fx > 0.0:
            lo, flo = x, fx
        elif fx < 0.0:
            hi, fhi = x, fx
        else:
            # Exact zero pins the root: the bracket collapses to the point.
            return RootResult(x, 0.0, iterations, 0.0)

        width = hi - lo
        blam, bres = _best()
        if abs(bres) <= rtol and width <= wtol:
            return RootResult(blam, bres, iterations, width)
        if math.nextafter(lo, math.inf) >= hi:
            # Adjacent floats: double precision is exhausted.
            return RootResult(blam, bres, iterations, width,
                              met_tolerance=abs(bres) <= rtol)

        dfx = eval_h_prime(x, params)
        cand = x - fx / dfx
        take_newton = (
            lo < cand < hi
            and cand != x
            and abs(fx) > rtol
            and not (newton_last and width > wtol)
        )
        if not take_newton:
            cand = 0.5 * (lo + hi)
        newton_last = take_newton
        x = cand
        fx = eval_h(x, params)

    raise ConvergenceError(
        f"no convergence after {max_iter} iterations (residual {fx:g})"
    )


def bisect_lambda(params: HParams, tol: float | None = None,
                  max_iter: int = DEFAULT_MAX_ITER) -> RootResult:
    """Pure bisection reference path for the same root.

    Slow but assumption-free: only the sign change is used.  Terminates on
    bracket width <= tol (default 1e-12) and returns the final midpoint.
    """
    if tol is not None:
        tol = float(tol)
        if not (tol > 0.0):
            raise ValueError("tol must be positive")
        wtol = tol
    else:
        wtol = _WIDTH_TOL
    lo, hi, flo, fhi = _initial_bracket(params)
    iterations = 0
    while hi - lo > wtol and iterations < max_iter:
        if math.nextafter(lo, math.inf) >= hi:
            break
        mid = 0.5 * (lo + hi)
        fm = eval_h(mid, params)
        iterations += 1
        if fm > 0.0:
            lo, flo = mid, fm
        elif fm < 0.0:
            hi, fhi = mid, fm
        else:
            return RootResult(mid, 0.0, iterations, 0.0)
    lam = 0.5 * (lo + hi)
    return RootResult(lam, eval_h(lam, params), iterations, hi - lo,
                      met_tolerance=hi - lo <= wtol)
