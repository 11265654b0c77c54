import numpy as np
import pytest

from hyproj import (Ball, FixedCoordinates, Pair, aux_distance,
                    bilinear_residual, dr_solve, map_solve, project_aux,
                    sample_feasible)
from helpers import assert_pair_close


def fix_first_slot(values):
    values = np.asarray(values, dtype=float)
    n = values.size
    mask = np.concatenate([np.ones(n, bool), np.zeros(n, bool)])
    vals = np.concatenate([values, np.zeros(n)])
    return FixedCoordinates(mask, vals)


class TestAuxSets:
    def test_ball_identity_inside(self):
        z = Pair([0.5, 0.0], [0.0, 0.5])
        ball = Ball(z, 1.0)
        q = Pair([0.7, 0.0], [0.0, 0.5])
        assert project_aux(q, ball) is q
        assert aux_distance(q, ball) == 0.0

    def test_ball_radial_shrink(self):
        ball = Ball(Pair([0.0], [0.0]), 1.0)
        q = Pair([2.0], [0.0])
        assert_pair_close(project_aux(q, ball), Pair([1.0], [0.0]), 1e-15)
        assert abs(aux_distance(q, ball) - 1.0) <= 1e-15

    def test_fixed_overwrites_all(self):
        s = FixedCoordinates(np.ones(4, bool), np.array([1.0, 2.0, 3.0, 4.0]))
        out = project_aux(Pair([9.0, 9.0], [9.0, 9.0]), s)
        assert_pair_close(out, Pair([1, 2], [3, 4]), 0.0)

    def test_fixed_partial(self):
        s = fix_first_slot([2.0, 0.0])
        out = project_aux(Pair([9.0, 9.0], [5.0, 6.0]), s)
        assert_pair_close(out, Pair([2, 0], [5, 6]), 0.0)
        assert abs(aux_distance(Pair([2.0, 1.0], [0.0, 0.0]), s) - 1.0) <= 1e-15

    def test_validation(self):
        with pytest.raises(ValueError):
            Ball(Pair([1.0], [0.0]), 0.0)
        with pytest.raises(ValueError):
            FixedCoordinates(np.ones(3, bool), np.zeros(3))
        with pytest.raises(ValueError):
            FixedCoordinates(np.ones(4, bool), np.zeros(2))
        s = fix_first_slot([1.0, 0.0])
        with pytest.raises(ValueError):
            project_aux(Pair([1.0], [0.0]), s)


class TestMapSolve:
    def test_feasible_start_converges_immediately(self):
        z0 = sample_feasible(1.0, [2.0, 0.0], [0.0, 1.0])
        s = fix_first_slot(z0.first)
        trace = map_solve(z0, 1.0, s)
        assert trace.converged
        assert trace.iterations <= 1
        assert trace.iterates[0] is z0

    def test_fixed_x_instance(self):
        s = fix_first_slot([2.0, 0.0])
        z0 = Pair([2.0, 0.0], [0.3, 0.7])
        trace = map_solve(z0, 1.0, s, max_iter=200, eps=1e-6)
        assert trace.converged
        assert trace.iterations <= 200
        rc = abs(bilinear_residual(trace.solution, 1.0))
        ra = aux_distance(trace.solution, s)
        assert rc <= 1e-6 and ra <= 1e-6

    def test_infeasible_ball(self):
        # every feasible pair has norm^2 >= 2*gamma, so a tiny origin ball
        # cannot intersect the constraint set
        ball = Ball(Pair([0.0, 0.0], [0.0, 0.0]), 0.1)
        trace = map_solve(Pair([1.0, 0.0], [0.0, 1.0]), 1.0, ball, max_iter=60)
        assert not trace.converged
        assert trace.iterations == 60

    def test_trace_shape(self):
        s = fix_first_slot([2.0, 0.0])
        trace = map_solve(Pair([2.0, 0.0], [-1.0, 0.4]), 1.0, s)
        assert len(trace.residuals) == trace.iterations
        assert len(trace.iterates) == trace.iterations + 1
        # aux residual is exactly zero for map iterates
        for rc, ra in trace.residuals:
            assert ra == 0.0

    def test_validation(self):
        s = fix_first_slot([1.0, 0.0])
        z0 = Pair([1.0, 0.0], [0.0, 1.0])
        with pytest.raises(ValueError):
            map_solve(z0, 1.0, s, max_iter=0)
        with pytest.raises(ValueError):
            map_solve(z0, 1.0, s, eps=0.0)
        with pytest.raises(ValueError):
            map_solve(z0, 0.0, s)

    def test_deterministic(self):
        s = fix_first_slot([1.5, -0.5])
        z0 = Pair([1.5, -0.5], [0.2, 0.9])
        t1 = map_solve(z0, 1.0, s)
        t2 = map_solve(z0, 1.0, s)
        assert t1.iterations == t2.iterations
        assert t1.residuals == t2.residuals
        assert_pair_close(t1.solution, t2.solution, 0.0)


class TestDrSolve:
    def test_feasible_start_is_fixed_point(self):
        z0 = sample_feasible(1.0, [2.0, 0.0], [0.0, 1.0])
        s = fix_first_slot(z0.first)
        trace = dr_solve(z0, 1.0, s)
        assert trace.converged
        assert trace.iterations == 0
        assert_pair_close(trace.solution, z0, 1e-9)

    def test_fixed_x_instance(self):
        s = fix_first_slot([2.0, 0.0])
        trace = dr_solve(Pair([2.0, 0.0], [0.3, 0.7]), 1.0, s,
                         max_iter=500, eps=1e-6)
        assert trace.converged
        assert trace.iterations <= 500
        rc = abs(bilinear_residual(trace.solution, 1.0))
        ra = aux_distance(trace.solution, s)
        assert rc <= 1e-6 and ra <= 1e-6

    def test_gamma_zero_rejected(self):
        s = fix_first_slot([1.0, 0.0])
        with pytest.raises(ValueError):
            dr_solve(Pair([1.0, 0.0], [0.0, 1.0]), 0.0, s)

    def test_infeasible_ball(self):
        ball = Ball(Pair([0.0, 0.0], [0.0, 0.0]), 0.1)
        trace = dr_solve(Pair([1.0, 0.0], [0.0, 1.0]), 1.0, ball, max_iter=40)
        assert not trace.converged

    def test_trace_shape(self):
        s = fix_first_slot([2.0, 0.0])
        trace = dr_solve(Pair([2.0, 0.0], [-0.7, 1.1]), 1.0, s)
        assert len(trace.residuals) == trace.iterations
        assert len(trace.iterates) == trace.iterations + 1
        # constraint residual is ~0 at shadow points; aux distance drives
        for rc, ra in trace.residuals:
            assert rc <= 1e-9


class TestResidualBehaviour:
    def test_map_residual_mostly_monotone(self):
        rng = np.random.default_rng(30)
        good = 0
        total = 100
        for _ in range(total):
            dim = int(rng.integers(2, 6))
            d = rng.standard_normal(dim)
            xstar = d / np.linalg.norm(d) * rng.uniform(1.0, 3.0)
            s = fix_first_slot(xstar)
            z0 = Pair(xstar, rng.standard_normal(dim))
            trace = map_solve(z0, 1.0, s, max_iter=200, eps=1e-6)
            cons = [rc for rc, _ in trace.residuals]
            tail = cons[5:]
            if all(b <= a * (1 + 1e-9) + 1e-14 for a, b in zip(tail, tail[1:])):
                good += 1
        assert good >= 95
