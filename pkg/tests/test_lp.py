"""Embedded simplex and the HiGHS seam against a brute-force reference."""
import numpy as np
import pytest

from didpr.lp import LinearProgram, LpError, LpStatus, solve, solve_feasibility, verify_solution
from lp_reference import random_lp, reference_solve


def make_lp(n, c, A_eq=None, b_eq=None, A_ub=None, b_ub=None):
    empty = lambda: (np.zeros((0, n)), np.zeros(0))
    if A_eq is None:
        A_eq, b_eq = empty()
    if A_ub is None:
        A_ub, b_ub = empty()
    return LinearProgram(n, np.asarray(c, float),
                         np.asarray(A_eq, float), np.asarray(b_eq, float),
                         np.asarray(A_ub, float), np.asarray(b_ub, float))


class TestPinnedPrograms:
    @pytest.mark.parametrize("backend", ["simplex", "highs"])
    def test_bounded_minimum(self, backend):
        lp = make_lp(1, [-1.0], A_ub=[[1.0]], b_ub=[3.0])
        sol = solve(lp, backend=backend)
        assert sol.status is LpStatus.OPTIMAL
        assert sol.x[0] == pytest.approx(3.0, abs=1e-9)
        assert sol.objective == pytest.approx(-3.0, abs=1e-9)

    @pytest.mark.parametrize("backend", ["simplex", "highs"])
    def test_infeasible_pair(self, backend):
        # x1 + x2 = 1 and x1 - x2 = 3 force x2 = -1
        lp = make_lp(2, [0.0, 0.0],
                     A_eq=[[1.0, 1.0], [1.0, -1.0]], b_eq=[1.0, 3.0])
        assert solve(lp, backend=backend).status is LpStatus.INFEASIBLE

    @pytest.mark.parametrize("backend", ["simplex", "highs"])
    def test_unbounded(self, backend):
        lp = make_lp(1, [-1.0])
        assert solve(lp, backend=backend).status is LpStatus.UNBOUNDED

    def test_feasibility_simplex_sum(self):
        lp = make_lp(2, [0.0, 0.0], A_eq=[[1.0, 1.0]], b_eq=[1.0])
        sol = solve_feasibility(lp)
        assert sol.status is LpStatus.OPTIMAL
        assert sol.x.sum() == pytest.approx(1.0, abs=1e-9)

    def test_feasibility_no_constraints(self):
        sol = solve_feasibility(make_lp(3, [1.0, 2.0, 3.0]))
        assert sol.status is LpStatus.OPTIMAL
        assert np.array_equal(sol.x, np.zeros(3))


class TestAgainstReference:
    def test_sixty_random_programs(self):
        rng = np.random.default_rng(20)
        optimal = infeasible = unbounded = 0
        for _ in range(60):
            lp = random_lp(rng, make_lp)
            want_status, want_obj = reference_solve(lp)
            sol = solve(lp, backend="simplex")
            assert sol.status.name.title() == want_status
            if want_status == "Optimal":
                optimal += 1
                assert sol.objective == pytest.approx(want_obj, abs=1e-9)
            elif want_status == "Infeasible":
                infeasible += 1
            else:
                unbounded += 1
        # the generator must actually exercise all three outcomes
        assert optimal >= 20 and infeasible >= 5 and unbounded >= 5

    def test_backends_agree(self):
        rng = np.random.default_rng(21)
        for _ in range(25):
            lp = random_lp(rng, make_lp)
            a = solve(lp, backend="simplex")
            b = solve(lp, backend="highs")
            assert a.status is b.status
            if a.status is LpStatus.OPTIMAL:
                assert a.objective == pytest.approx(b.objective, abs=1e-8)


class TestContracts:
    def test_optimal_solutions_verified(self):
        rng = np.random.default_rng(22)
        for _ in range(20):
            lp = random_lp(rng, make_lp)
            sol = solve(lp, backend="simplex")
            if sol.status is not LpStatus.OPTIMAL:
                continue
            res = verify_solution(lp, sol.x)
            assert res["eq"] <= 1e-7 * (1.0 + np.abs(lp.b_eq).max(initial=0.0))
            assert res["ub"] <= 1e-7
            assert res["neg"] <= 1e-9

    def test_deterministic(self):
        rng = np.random.default_rng(23)
        lp = random_lp(rng, make_lp)
        a = solve(lp, backend="simplex")
        b = solve(lp, backend="simplex")
        assert a.status is b.status
        if a.status is LpStatus.OPTIMAL:
            assert np.array_equal(a.x, b.x)
            assert a.objective == b.objective

    def test_iteration_cap_raises(self):
        lp = make_lp(3, [-1.0, -2.0, -3.0],
                     A_ub=[[1.0, 1.0, 1.0], [2.0, 1.0, 0.0]],
                     b_ub=[5.0, 4.0])
        with pytest.raises(LpError, match="cycling|stall|iteration"):
            solve(lp, backend="simplex", max_iters=1)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            LinearProgram(2, np.zeros(3), np.zeros((0, 2)), np.zeros(0),
                          np.zeros((0, 2)), np.zeros(0))

    def test_nonfinite_rhs_rejected(self):
        with pytest.raises(ValueError):
            make_lp(1, [1.0], A_eq=[[1.0]], b_eq=[np.inf])
