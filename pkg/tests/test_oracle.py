import math

import numpy as np
import pytest

from hyproj import (Pair, Reduced2D, best_sample_objective,
                    check_lipschitz_monotone, dist_sq, inner, oracle_min_2d,
                    project_bilinear, project_h1, project_hgamma,
                    representative, sample_feasible)
from helpers import assert_pair_close, random_pair


class TestReduced2D:
    def test_negative_norm_rejected(self):
        with pytest.raises(ValueError):
            Reduced2D(-1.0, 1.0, 1.0)

    def test_fields(self):
        r = Reduced2D(2.0, 1.0, -3.0)
        assert (r.a, r.b, r.gamma) == (2.0, 1.0, -3.0)


class TestOracleMin2D:
    def test_query_on_set(self):
        # alpha = beta = 1 is feasible: 3 - 1 = 2*gamma at gamma=1.
        alpha, beta, val = oracle_min_2d(Reduced2D(math.sqrt(3.0), 1.0, 1.0))
        assert abs(alpha - 1.0) <= 1e-7
        assert abs(beta - 1.0) <= 1e-7
        assert val <= 1e-10

    def test_matches_collinear_projection(self):
        alpha, beta, val = oracle_min_2d(Reduced2D(2.0, 1.0, 1.0))
        res = project_h1([2.0], [1.0])
        obj = dist_sq(Pair([2.0], [1.0]), res.point)
        assert abs(val - obj) <= 1e-6 * (1.0 + val)
        # the minimizer reproduces the projection slot scalings
        assert abs(alpha * 2.0 - res.point.first[0]) <= 1e-6
        assert abs(beta * 1.0 - res.point.second[0]) <= 1e-6

    def test_alpha_floor_enforced(self):
        # gamma large: feasibility needs alpha >= sqrt(2*gamma)/a.
        a, b, g = 1.0, 1.0, 8.0
        alpha, beta, val = oracle_min_2d(Reduced2D(a, b, g))
        alpha_min = math.sqrt(2.0 * g) / a
        assert alpha >= alpha_min - 1e-9
        assert abs(alpha * alpha * a * a - beta * beta * b * b - 2 * g) <= 1e-7

    def test_negative_gamma(self):
        alpha, beta, val = oracle_min_2d(Reduced2D(1.0, 2.0, -1.0))
        res = project_hgamma([1.0], [2.0], -1.0)
        obj = dist_sq(Pair([1.0], [2.0]), res.point)
        assert abs(val - obj) <= 1e-6 * (1.0 + val)

    def test_degenerate_inputs_rejected(self):
        with pytest.raises(ValueError):
            oracle_min_2d(Reduced2D(0.0, 1.0, 1.0))
        with pytest.raises(ValueError):
            oracle_min_2d(Reduced2D(1.0, 0.0, 1.0))

    def test_small_grid_rejected(self):
        with pytest.raises(ValueError):
            oracle_min_2d(Reduced2D(1.0, 1.0, 1.0), grid=10)

    def test_sandwich_against_library(self):
        rng = np.random.default_rng(20)
        checked = 0
        for _ in range(150):
            dim = int(rng.integers(1, 4))
            gamma = float(rng.choice([0.1, -0.1, 1.0, -1.0, 10.0]))
            z = random_pair(rng, dim, scale=1.5)
            a = float(np.linalg.norm(z.first))
            b = float(np.linalg.norm(z.second))
            if a < 1e-6 or b < 1e-6:
                continue
            res = project_hgamma(z.first, z.second, gamma)
            obj = dist_sq(z, representative(res))
            _, _, val = oracle_min_2d(Reduced2D(a, b, gamma))
            assert abs(val - obj) <= 1e-6 * (1.0 + val)
            checked += 1
        assert checked > 100


class TestSampleFeasible:
    def test_plain_seed(self):
        z = sample_feasible(1.0, [1.0, 0.0], [0.0, 0.0])
        assert_pair_close(z, Pair([1, 0], [1, 0]), 0.0)

    def test_orthogonal_component(self):
        z = sample_feasible(1.0, [2.0, 0.0], [0.0, 5.0])
        assert_pair_close(z, Pair([2, 0], [0.5, 5]), 0.0)

    def test_negative_level(self):
        z = sample_feasible(-1.0, [1.0, 0.0], [0.0, 1.0])
        assert_pair_close(z, Pair([1, 0], [-1, 1]), 0.0)

    def test_zero_seed_rejected(self):
        with pytest.raises(ValueError):
            sample_feasible(1.0, [0.0, 0.0], [1.0, 0.0])

    def test_constraint_exact_many_seeds(self):
        rng = np.random.default_rng(21)
        for _ in range(10000):
            dim = int(rng.integers(1, 5))
            gamma = float(rng.choice([0.1, -1.0, 1.0, 5.0]))
            seed = rng.standard_normal(dim)
            if np.linalg.norm(seed) < 1e-3:
                continue
            z = sample_feasible(gamma, seed, rng.standard_normal(dim))
            err = abs(inner(z.first, z.second) - gamma)
            assert err <= 1e-12 * max(1.0, abs(gamma), z.norm() ** 2)


class TestBestSampleObjective:
    def test_upper_bounds_projection(self):
        rng = np.random.default_rng(22)
        for kind in ("bilinear", "hyperbola"):
            for _ in range(10):
                z = random_pair(rng, 3)
                gamma = 1.5
                if kind == "bilinear":
                    res = project_bilinear(z.first, z.second, gamma)
                else:
                    res = project_hgamma(z.first, z.second, gamma)
                obj = dist_sq(z, representative(res))
                best = best_sample_objective(z, gamma, 2000, rng, kind=kind)
                assert obj <= best + 1e-9 * (1.0 + obj)

    def test_consistent_with_scalar_sampler(self):
        # The vectorized sampler and the scalar one draw from the same set.
        rng = np.random.default_rng(23)
        q = random_pair(rng, 2)
        best = best_sample_objective(q, 1.0, 500, rng)
        rng2 = np.random.default_rng(24)
        manual = min(
            dist_sq(q, sample_feasible(1.0, rng2.standard_normal(2),
                                       rng2.standard_normal(2)))
            for _ in range(500)
        )
        # Not the same draws, but the same distribution: both are honest
        # upper bounds on the same minimum.
        res = project_bilinear(q.first, q.second, 1.0)
        true_obj = dist_sq(q, representative(res))
        assert best >= true_obj - 1e-12
        assert manual >= true_obj - 1e-12


class TestMonotoneReport:
    def test_identical_inputs_skipped(self):
        z = Pair([1.0, 0.0], [1.0, 0.0])
        report = check_lipschitz_monotone([z, z], 1.0)
        assert report.pairs_used == 0
        assert report.skipped_identical == 1

    def test_set_valued_excluded(self):
        zs = [Pair([3.0, 0.0], [3.0, 0.0]), Pair([1.0, 0.0], [0.0, 1.0]),
              Pair([0.7, 0.1], [0.2, 0.9])]
        report = check_lipschitz_monotone(zs, 1.0)
        assert report.skipped_set_valued == 1
        assert report.pairs_used == 1

    def test_local_monotonicity_near_set(self):
        rng = np.random.default_rng(25)
        seed = np.array([1.2, -0.4, 0.8])
        base = sample_feasible(1.0, seed, rng.standard_normal(3))
        zs = []
        for _ in range(20):
            delta = rng.standard_normal(6)
            delta *= 1e-3 / np.linalg.norm(delta)
            zs.append(Pair(base.first + delta[:3], base.second + delta[3:]))
        report = check_lipschitz_monotone(zs, 1.0)
        assert report.pairs_used == 190
        assert report.min_monotone_inner >= -1e-9
        assert report.max_lipschitz is not None
