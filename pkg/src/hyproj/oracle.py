"""Independent ground truth for the projection formulas.

Two ingredients, deliberately dumb: a dense scan plus golden-section
refinement of the two-variable reduced problem, and a sampler that
manufactures exactly feasible points.  Restricting the nearest point to
nonnegative multiples (alpha*u0, beta*v0) of the query slots loses
nothing -- for fixed norms the objective only improves by aligning with
the query -- so the reduced minimum equals the true minimum whenever both
slots are nonzero.  Neither path shares a single formula with the
projection modules they check.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bilinear import project_bilinear
from .hyperbola import Singleton
from .space import Pair, as_point, check_gamma

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Reduced2D:
    """Reduced data of a projection query: slot norms a, b and the level.

    The reduced problem minimizes (1-alpha)^2 a^2 + (1-beta)^2 b^2 over
    alpha, beta >= 0 subject to alpha^2 a^2 - beta^2 b^2 = 2*gamma.
    """

    a: float
    b: float
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "gamma", float(self.gamma))
        if not (self.a >= 0.0 and self.b >= 0.0):
            raise ValueError("slot norms must be nonnegative")
        if not all(math.isfinite(t) for t in (self.a, self.b, self.gamma)):
            raise ValueError("reduced data must be finite")


def _golden_min(f, lo: float, hi: float, iters: int):
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    mid = 0.5 * (lo + hi)
    cands = [(fc, c), (fd, d), (f(mid), mid)]
    fbest, xbest = min(cands, key=lambda t: t[0])
    return xbest, fbest


def oracle_min_2d(r: Reduced2D, grid: int = 10001,
                  refine_iters: int = 80) -> tuple[float, float, float]:
    """Brute-force minimum of the reduced problem.

    Scans alpha over a range guaranteed to contain the minimizer, takes
    beta = sqrt((alpha^2 a^2 - 2 gamma)) / b on the feasible part, then
    golden-section refines around the best grid cell.  Returns
    (alpha, beta, value).  Requires a > 0 and b > 0; degenerate queries
    have closed-form answers and are validated separately.
    """
    a, b, g = r.a, r.b, r.gamma
    if not (a > 0.0 and b > 0.0):
        raise ValueError("oracle_min_2d requires a > 0 and b > 0")
    grid = int(grid)
    if grid < 100:
        raise ValueError("grid must be at least 100")
    refine_iters = int(refine_iters)
    if refine_iters < 1:
        raise ValueError("refine_iters must be positive")

    a2, b2 = a * a, b * b
    alpha_min = math.sqrt(max(0.0, 2.0 * g)) / a

    def value(alpha: float) -> float:
        rad = alpha * alpha * a2 - 2.0 * g
        beta = math.sqrt(max(0.0, rad)) / b
        da, db = 1.0 - alpha, 1.0 - beta
        return da * da * a2 + db * db * b2

    # Any feasible point upper-bounds the minimum, which in turn bounds
    # how far the optimal alpha can sit above 1.
    ub = math.inf
    if g > 0.0:
        ub = min(ub, value(alpha_min))
    if 2.0 * g + b2 >= 0.0:
        ub = min(ub, value(math.sqrt(2.0 * g + b2) / a))
    if g < 0.0:
        ub = min(ub, value(0.0))
    alpha_max = max(alpha_min, 1.0) + math.sqrt(ub) / a + 1.0
    alpha_max = max(alpha_max, 3.0 + 2.0 * abs(g) / a2 + 1.0)

    for _ in range(6):
        alphas = np.linspace(alpha_min, alpha_max, grid)
        rad = alphas * alphas * a2 - 2.0 * g
        feas = rad >= 0.0
        betas = np.sqrt(np.where(feas, rad, 0.0)) / b
        vals = (1.0 - alphas) ** 2 * a2 + (1.0 - betas) ** 2 * b2
        vals = np.where(feas, vals, np.inf)
        i = int(np.argmin(vals))
        if np.isinf(vals[i]):
            raise ValueError("empty feasible range in the alpha scan")
        if i < grid - 2:
            break
        alpha_max *= 2.0  # minimizer at the far edge: widen and rescan

    lo = float(alphas[max(i - 1, 0)])
    hi = float(alphas[min(i + 1, grid - 1)])
    alpha, val = _golden_min(value, lo, hi, refine_iters)
    if vals[i] < val:
        alpha, val = float(alphas[i]), float(vals[i])
    beta = math.sqrt(max(0.0, alpha * alpha * a2 - 2.0 * g)) / b
    return float(alpha), float(beta), float(val)


def sample_feasible(gamma, x_seed, w) -> Pair:
    """An exactly feasible pair built from a seed direction.

    Returns (x_seed, gamma*x_seed/||x_seed||^2 + w_perp) where w_perp is
    the component of w orthogonal to x_seed, so <x, y> = gamma up to
    rounding.
    """
    g = check_gamma(gamma)
    x = as_point(x_seed)
    wv = as_point(w)
    if x.shape != wv.shape:
        raise ValueError("x_seed and w must have equal dimension")
    nx2 = float(np.dot(x, x))
    if not nx2 > 0.0:
        raise ValueError("x_seed must be nonzero")
    w_perp = wv - (float(np.dot(wv, x)) / nx2) * x
    return Pair(x, (g / nx2) * x + w_perp)


def best_sample_objective(query: Pair, gamma, count: int,
                          rng: np.random.Generator,
                          kind: str = "bilinear") -> float:
    """Best objective over `count` random exactly feasible points.

    Seeds and orthogonal components are standard normal.  For
    kind="hyperbola" the bilinear samples are rotated by -pi/4, which
    carries the inner-product level set onto the hyperbola at the same
    level.  Always an upper bound on the true minimum.
    """
    g = check_gamma(gamma)
    if kind not in ("bilinear", "hyperbola"):
        raise ValueError("kind must be 'bilinear' or 'hyperbola'")
    n = query.dim
    count = int(count)
    if count < 1:
        raise ValueError("count must be positive")
    xs = rng.standard_normal((count, n))
    norms2 = np.einsum("ij,ij->i", xs, xs)
    bad = norms2 < 1e-12
    while np.any(bad):
        xs[bad] = rng.standard_normal((int(bad.sum()), n))
        norms2 = np.einsum("ij,ij->i", xs, xs)
        bad = norms2 < 1e-12
    ws = rng.standard_normal((count, n))
    coef = np.einsum("ij,ij->i", ws, xs) / norms2
    ys = (g / norms2)[:, None] * xs + ws - coef[:, None] * xs
    if kind == "hyperbola":
        us = (xs + ys) / math.sqrt(2.0)
        vs = (ys - xs) / math.sqrt(2.0)
        xs, ys = us, vs
    da = xs - query.first[None, :]
    db = ys - query.second[None, :]
    objs = np.einsum("ij,ij->i", da, da) + np.einsum("ij,ij->i", db, db)
    return float(objs.min())


@dataclass
class MonotoneReport:
    """Empirical local regularity of the projection near the constraint set."""

    max_lipschitz: Optional[float]
    min_monotone_inner: Optional[float]
    pairs_used: int
    skipped_set_valued: int
    skipped_identical: int


def check_lipschitz_monotone(zs: Sequence[Pair], gamma,
                             tol: float | None = None,
                             deg_tol: float = 1e-12) -> MonotoneReport:
    """Diagnostic Lipschitz/monotonicity report over pairs of queries.

    Projects every query onto the bilinear set; set-valued answers are
    excluded.  Over the remaining pairs, reports the largest displacement
    ratio ||P(z1) - P(z2)|| / ||z1 - z2|| and the smallest inner product
    <P(z1) - P(z2), z1 - z2>.  Purely informational: near the set both
    are expected to witness Lipschitz continuity and monotonicity, but no
    threshold is enforced here.
    """
    g = check_gamma(gamma)
    projected = []
    skipped = 0
    for z in zs:
        res = project_bilinear(z.first, z.second, g, tol=tol, deg_tol=deg_tol)
        if isinstance(res, Singleton):
            projected.append((z, res.point))
        else:
            skipped += 1
    max_lip = None
    min_inner = None
    used = 0
    identical = 0
    for (z1, p1), (z2, p2) in itertools.combinations(projected, 2):
        dz = z1 - z2
        ndz = dz.norm()
        if ndz == 0.0:
            identical += 1
            continue
        dp = p1 - p2
        lip = dp.norm() / ndz
        mono = float(np.dot(dp.stacked(), dz.stacked()))
        max_lip = lip if max_lip is None else max(max_lip, lip)
        min_inner = mono if min_inner is None else min(min_inner, mono)
        used += 1
    return MonotoneReport(max_lip, min_inner, used, skipped, identical)
