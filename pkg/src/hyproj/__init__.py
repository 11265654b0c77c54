"""Projections onto bilinear constraint sets and hyperbolas.

Exact, possibly set-valued nearest-point maps for the sets
{ (x, y) : <x, y> = gamma } and { (u, v) : ||u||^2 - ||v||^2 = 2*gamma }
in R^n x R^n, together with brute-force oracles and projection-driven
feasibility solvers.
"""

from .bilinear import (Case, bilinear_residual, classify, project_bilinear,
                       representative)
from .hyperbola import (ProjectionResult, Singleton, SphereFamily,
                        hyperbola_residual, negate_second_result,
                        project_h1, project_hgamma, rotate_result,
                        scale_result, swap_result)
from .oracle import (MonotoneReport, Reduced2D, best_sample_objective,
                     check_lipschitz_monotone, oracle_min_2d, sample_feasible)
from .rootfind import (ConvergenceError, HParams, RootResult, bisect_lambda,
                       eval_h, eval_h_prime, solve_lambda)
from .solver import (AuxSet, Ball, FixedCoordinates, SolverTrace,
                     aux_distance, dr_solve, map_solve, project_aux)
from .space import (Pair, as_point, check_gamma, dist_sq, inner,
                    negate_second, norm, rotate_quarter, scale_pair, swap)

__version__ = "0.1.0"

__all__ = [
    "AuxSet",
    "Ball",
    "Case",
    "ConvergenceError",
    "FixedCoordinates",
    "HParams",
    "MonotoneReport",
    "Pair",
    "ProjectionResult",
    "Reduced2D",
    "RootResult",
    "Singleton",
    "SolverTrace",
    "SphereFamily",
    "as_point",
    "aux_distance",
    "best_sample_objective",
    "bilinear_residual",
    "bisect_lambda",
    "check_gamma",
    "check_lipschitz_monotone",
    "classify",
    "dist_sq",
    "dr_solve",
    "eval_h",
    "eval_h_prime",
    "hyperbola_residual",
    "inner",
    "map_solve",
    "negate_second",
    "negate_second_result",
    "norm",
    "oracle_min_2d",
    "project_aux",
    "project_bilinear",
    "project_h1",
    "project_hgamma",
    "representative",
    "rotate_quarter",
    "rotate_result",
    "sample_feasible",
    "scale_pair",
    "scale_result",
    "solve_lambda",
    "swap",
    "swap_result",
    "__version__",
]
