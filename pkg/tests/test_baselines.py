"""Tests for the greedy and random fleet baselines and the solver factory."""

from __future__ import annotations

from fractions import Fraction

import pytest

from fleet_design.evaluation import build_base_fleet, is_feasible
from fleet_design.models import LnsParams, Method, RobotType
from fleet_design.pathing import build_travel_set
from fleet_design.scenarios import generate, knapsack_reduction
from fleet_design.seeding import make_rng
from fleet_design.solvers import (
    GreedySolver,
    LnsSolver,
    OracleLimits,
    OracleSolver,
    RandomFleetSolver,
    get_solver,
)
from fleet_design.solvers.baselines import (
    fixed_fleet_mrta,
    fleet_from_counts,
    greedy_fleet,
    random_fleet,
)
from fleet_design.solvers.exact import brute_force
from tests.conftest import make_problem, tiny_spec

FAST = LnsParams(iterations=30)


# ======================================================================
# Fixed-fleet tours
# ======================================================================


class TestFixedFleetMrta:
    def setup_method(self) -> None:
        self.problem = generate(tiny_spec(seed=4, task_count=6))
        self.travel = build_travel_set(self.problem)
        self.base = build_base_fleet(self.problem)

    def test_only_given_robots_work(self) -> None:
        fleet = (self.base.robots[0],)
        solution = fixed_fleet_mrta(
            self.problem, fleet, FAST, travel_set=self.travel, base_fleet=self.base
        )
        assert len(solution.tours) == len(self.base)
        assert set(solution.active_robots()) <= {0}
        assert is_feasible(solution, self.problem, self.travel, self.base).feasible

    def test_empty_fleet_serves_nothing(self) -> None:
        solution = fixed_fleet_mrta(self.problem, (), FAST, base_fleet=self.base)
        assert solution.visit_count() == 0
        assert len(solution.tours) == len(self.base)

    def test_budget_is_not_checked(self) -> None:
        problem = make_problem(budget=15)
        base = build_base_fleet(problem)
        solution = fixed_fleet_mrta(problem, base.robots, FAST, base_fleet=base)
        assert solution.visit_count() == 4

    def test_matches_fleet_restricted_oracle(self) -> None:
        matches = 0
        for seed in range(10):
            problem = generate(tiny_spec(seed=seed, task_count=4))
            travel = build_travel_set(problem)
            base = build_base_fleet(problem)
            fleet = (base.robots[0], base.robots[-1])
            optimum = brute_force(problem, travel_set=travel, fleet=fleet).reward
            solution = fixed_fleet_mrta(
                problem,
                fleet,
                LnsParams(iterations=200, seed=seed),
                travel_set=travel,
                base_fleet=base,
            )
            assert solution.visit_count() <= optimum
            matches += solution.visit_count() == optimum
        assert matches >= 9


class TestFleetFromCounts:
    def setup_method(self) -> None:
        problem = make_problem(
            robot_types=(
                RobotType(id=0, deploy_cost=20, battery=100),
                RobotType(id=1, deploy_cost=25, battery=100),
            ),
            budget=50,
        )
        self.base = build_base_fleet(problem)  # robots 0-2 of type 0, 3-4 of type 1

    def test_takes_first_copies(self) -> None:
        fleet = fleet_from_counts(self.base, {1: 2, 0: 1})
        assert [r.robot_index for r in fleet] == [0, 3, 4]

    def test_empty_counts(self) -> None:
        assert fleet_from_counts(self.base, {}) == ()

    def test_too_many_copies(self) -> None:
        with pytest.raises(ValueError, match="the base fleet has 2"):
            fleet_from_counts(self.base, {1: 3})

    def test_unknown_type(self) -> None:
        with pytest.raises(ValueError, match="the base fleet has 0"):
            fleet_from_counts(self.base, {7: 1})


# ======================================================================
# Greedy
# ======================================================================


class TestGreedyFleet:
    def test_picks_best_ratio_on_knapsack(self) -> None:
        problem = knapsack_reduction([10, 10], [3, 1], 10)
        solution, trace = greedy_fleet(problem, FAST)
        assert len(trace.steps) == 1
        step = trace.steps[0]
        assert step.type_id == 0
        assert step.marginal_gain == 3
        assert step.ratio == Fraction(3, 10)
        assert trace.evaluations[1] == [(0, Fraction(3, 10)), (1, Fraction(1, 10))]
        assert solution.visit_count() == 3
        assert trace.skipped_budget == 0
        assert not trace.stopped_on_zero_gain

    def test_tie_goes_to_lower_type(self) -> None:
        problem = knapsack_reduction([5, 5], [1, 1], 5)
        _, trace = greedy_fleet(problem, FAST)
        assert [s.type_id for s in trace.steps] == [0]

    def test_stops_on_zero_gain(self) -> None:
        problem = make_problem(requirements=[{1}, {1}, {1}, {1}], budget=30)
        solution, trace = greedy_fleet(problem, FAST)
        assert trace.steps == []
        assert trace.fleet == []
        assert trace.stopped_on_zero_gain
        assert trace.skipped_budget == 30
        assert solution.visit_count() == 0

    @pytest.mark.parametrize("seed", range(4))
    def test_every_choice_is_maximal(self, seed: int) -> None:
        problem = generate(tiny_spec(seed=seed, task_count=6, budget=40))
        travel = build_travel_set(problem)
        solution, trace = greedy_fleet(problem, FAST, travel_set=travel)
        for step in trace.steps:
            compared = trace.evaluations[step.step]
            top = max(ratio for _, ratio in compared)
            assert step.ratio == top
            assert step.type_id == min(t for t, ratio in compared if ratio == top)
        assert trace.rewards == sorted(set(trace.rewards))
        spent = sum((s.cost for s in trace.steps), Fraction(0))
        assert spent + trace.skipped_budget == problem.budget
        assert is_feasible(solution, problem, travel).feasible

    @pytest.mark.parametrize("seed", range(5))
    def test_never_beats_the_oracle(self, seed: int) -> None:
        problem = generate(tiny_spec(seed=seed, task_count=4))
        travel = build_travel_set(problem)
        solution, trace = greedy_fleet(problem, FAST.with_seed(seed), travel_set=travel)
        assert solution.visit_count() <= brute_force(problem, travel_set=travel).reward
        assert sum((s.cost for s in trace.steps), Fraction(0)) <= problem.budget

    def test_deterministic(self) -> None:
        problem = generate(tiny_spec(seed=2, task_count=6))
        first = greedy_fleet(problem, FAST.with_seed(5))
        second = greedy_fleet(problem, FAST.with_seed(5))
        assert first[0] == second[0]
        assert first[1].steps == second[1].steps


# ======================================================================
# Random fleet
# ======================================================================


class TestRandomFleet:
    @pytest.mark.parametrize("seed", range(5))
    def test_fleet_is_maximal_and_feasible(self, seed: int) -> None:
        problem = generate(tiny_spec(seed=seed, task_count=6, budget=40))
        travel = build_travel_set(problem)
        solution, fleet = random_fleet(problem, make_rng(seed), FAST, travel_set=travel)
        spent = sum((problem.type_of(r).deploy_cost for r in fleet), Fraction(0))
        cheapest = min(rt.deploy_cost for rt in problem.robot_types)
        assert spent <= problem.budget
        assert problem.budget - spent < cheapest
        assert set(solution.active_robots()) <= {r.robot_index for r in fleet}
        assert is_feasible(solution, problem, travel).feasible

    def test_same_rng_same_fleet(self) -> None:
        problem = generate(tiny_spec(seed=7, task_count=6, budget=40))
        first = random_fleet(problem, make_rng(3), FAST)
        second = random_fleet(problem, make_rng(3), FAST)
        assert first == second

    def test_nothing_affordable(self) -> None:
        problem = make_problem(budget=5)
        solution, fleet = random_fleet(problem, make_rng(0), FAST)
        assert fleet == ()
        assert solution.visit_count() == 0

    @pytest.mark.parametrize("seed", range(5))
    def test_larger_budget_extends_the_fleet(self, seed: int) -> None:
        types = tuple(RobotType(id=i, deploy_cost=10, battery=100) for i in range(3))
        small = random_fleet(make_problem(robot_types=types, budget=20), make_rng(seed), FAST)
        large = random_fleet(make_problem(robot_types=types, budget=40), make_rng(seed), FAST)
        small_types = [r.type_ref for r in small[1]]
        large_types = [r.type_ref for r in large[1]]
        assert len(small_types) == 2
        assert len(large_types) == 4
        assert large_types[:2] == small_types


# ======================================================================
# Solver factory
# ======================================================================


class TestGetSolver:
    @pytest.mark.parametrize(
        "method, expected",
        [
            (Method.LNS, LnsSolver),
            ("greedy", GreedySolver),
            ("random", RandomFleetSolver),
            (Method.ORACLE, OracleSolver),
        ],
    )
    def test_known_methods(self, method: Method | str, expected: type) -> None:
        assert isinstance(get_solver(method), expected)

    def test_unknown_method(self) -> None:
        with pytest.raises(ValueError, match="Unsupported method"):
            get_solver("genetic")

    def test_oracle_limits_are_passed(self) -> None:
        limits = OracleLimits(max_tasks=3)
        solver = get_solver(Method.ORACLE, limits=limits)
        assert isinstance(solver, OracleSolver)
        assert solver.limits is limits

    def test_greedy_output_carries_trace(self) -> None:
        problem = knapsack_reduction([10, 10], [3, 1], 10)
        output = get_solver(Method.GREEDY).solve(problem, FAST)
        assert output.trace is not None
        assert output.reward == 3
        assert [r.type_ref for r in output.fleet] == [0]

    def test_random_output_fleet_is_bought_fleet(self) -> None:
        problem = knapsack_reduction([10, 10], [3, 1], 10)
        output = get_solver(Method.RANDOM).solve(problem, FAST.with_seed(1))
        assert len(output.fleet) == 1
        assert output.reward in (1, 3)
        assert output.log == ()
