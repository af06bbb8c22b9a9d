"""Baseline fleet builders: greedy cost-effectiveness and random selection.

Both choose a fleet first and then optimise tours for that fixed fleet with
the LNS restricted to task removal.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import structlog

from fleet_design.evaluation import build_base_fleet
from fleet_design.models.enums import Method
from fleet_design.models.params import LnsParams
from fleet_design.models.problem import BaseFleet, Problem, Robot
from fleet_design.models.solution import Solution
from fleet_design.pathing import TravelSet, build_travel_set
from fleet_design.seeding import derive_seed, make_rng
from fleet_design.solvers import lns
from fleet_design.solvers.base import BaseSolver, SolverOutput
from fleet_design.solvers.context import SolverContext

logger = structlog.get_logger(__name__)


def fixed_fleet_mrta(
    problem: Problem,
    fleet: Sequence[Robot],
    params: LnsParams,
    *,
    travel_set: TravelSet | None = None,
    base_fleet: BaseFleet | None = None,
) -> Solution:
    """Optimise tours for an already chosen *fleet*.

    The fleet's robots must come from the base fleet.  The budget is not
    checked, only task removal is used and idle robots are never discounted.
    The returned solution spans the whole base fleet; robots outside *fleet*
    keep empty tours.
    """
    base = base_fleet if base_fleet is not None else build_base_fleet(problem)
    if not fleet:
        return Solution.empty(base)
    context = SolverContext.build(
        problem, travel_set, base, robots=fleet, fixed_fleet=True
    )
    inner = params.model_copy(update={"removal_mode_bias": 0.0})
    return lns.solve(problem, inner, context=context).solution


def _reward(solution: Solution) -> int:
    return solution.visit_count()


def _next_copy(base: BaseFleet, type_id: int, taken: set[int]) -> Robot:
    for robot in base.robots:
        if robot.type_ref == type_id and robot.robot_index not in taken:
            return robot
    raise LookupError(f"base fleet has no unused robot of type {type_id}")


def fleet_from_counts(base: BaseFleet, counts: dict[int, int]) -> tuple[Robot, ...]:
    """Pick the first ``counts[type_id]`` base-fleet robots of every type.

    Raises:
        ValueError: If the base fleet has fewer copies of a type than asked for.
    """
    available = base.counts()
    taken: set[int] = set()
    fleet: list[Robot] = []
    for type_id, count in sorted(counts.items()):
        if count > available.get(type_id, 0):
            raise ValueError(
                f"fleet asks for {count} robots of type {type_id}, "
                f"the base fleet has {available.get(type_id, 0)}"
            )
        for _ in range(count):
            robot = _next_copy(base, type_id, taken)
            taken.add(robot.robot_index)
            fleet.append(robot)
    return tuple(fleet)


# ---------------------------------------------------------------------------
# Greedy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GreedyStep:
    """One accepted greedy step."""

    step: int
    type_id: int
    marginal_gain: int
    cost: Fraction
    ratio: Fraction
    reward_after: int

    def as_row(self) -> dict[str, object]:
        return {
            "step": self.step,
            "type_id": self.type_id,
            "marginal_gain": self.marginal_gain,
            "cost": self.cost,
            "ratio": self.ratio,
            "reward_after": self.reward_after,
        }


GREEDY_TRACE_COLUMNS = ("step", "type_id", "marginal_gain", "cost", "ratio", "reward_after")


@dataclass
class GreedyTrace:
    """Steps taken by :func:`greedy_fleet` and the budget left unused.

    ``evaluations`` maps each step to the ``(type_id, ratio)`` pairs that were
    compared, so the maximality of every choice can be checked afterwards.
    """

    steps: list[GreedyStep] = field(default_factory=list)
    fleet: list[Robot] = field(default_factory=list)
    skipped_budget: Fraction = Fraction(0)
    stopped_on_zero_gain: bool = False
    evaluations: dict[int, list[tuple[int, Fraction]]] = field(default_factory=dict)

    @property
    def rewards(self) -> list[int]:
        return [s.reward_after for s in self.steps]


def greedy_fleet(
    problem: Problem,
    params_inner: LnsParams,
    *,
    travel_set: TravelSet | None = None,
) -> tuple[Solution, GreedyTrace]:
    """Add one robot at a time, picking the best marginal reward per unit cost.

    Every affordable type is evaluated by re-optimising the tours of the
    current fleet plus one robot of that type, seeded by
    ``derive_seed(params_inner.seed, step, type_id)``.  Ties go to the lower
    type id.  The loop stops when nothing is affordable or the best marginal
    gain is zero; in the latter case the remaining budget is recorded as
    skipped.
    """
    travel = travel_set if travel_set is not None else build_travel_set(problem)
    base = build_base_fleet(problem)
    trace = GreedyTrace()
    taken: set[int] = set()
    spent = Fraction(0)
    reward = 0
    solution = Solution.empty(base)
    step = 0

    while True:
        step += 1
        remaining = problem.budget - spent
        affordable = [rt for rt in problem.robot_types if rt.deploy_cost <= remaining]
        if not affordable:
            break

        chosen: tuple[Fraction, int, Robot, Solution, int] | None = None
        compared: list[tuple[int, Fraction]] = []
        for rtype in affordable:
            robot = _next_copy(base, rtype.id, taken)
            seed = derive_seed(params_inner.seed, step, rtype.id)
            candidate = fixed_fleet_mrta(
                problem,
                [*trace.fleet, robot],
                params_inner.with_seed(seed),
                travel_set=travel,
                base_fleet=base,
            )
            gain = _reward(candidate) - reward
            ratio = Fraction(gain) / rtype.deploy_cost
            compared.append((rtype.id, ratio))
            if chosen is None or ratio > chosen[0]:
                chosen = (ratio, gain, robot, candidate, rtype.id)
        trace.evaluations[step] = compared

        assert chosen is not None
        ratio, gain, robot, candidate, type_id = chosen
        if gain <= 0:
            trace.stopped_on_zero_gain = True
            break

        trace.fleet.append(robot)
        taken.add(robot.robot_index)
        spent += problem.robot_types[type_id].deploy_cost
        solution, reward = candidate, _reward(candidate)
        trace.steps.append(
            GreedyStep(
                step=step,
                type_id=type_id,
                marginal_gain=gain,
                cost=problem.robot_types[type_id].deploy_cost,
                ratio=ratio,
                reward_after=reward,
            )
        )
        logger.debug("greedy_step", step=step, type_id=type_id, gain=gain, reward=reward)

    trace.skipped_budget = problem.budget - spent
    logger.info(
        "greedy_finished",
        scenario=problem.name,
        reward=reward,
        fleet_size=len(trace.fleet),
        skipped_budget=str(trace.skipped_budget),
    )
    return solution, trace


# ---------------------------------------------------------------------------
# Random fleet
# ---------------------------------------------------------------------------


def random_fleet(
    problem: Problem,
    rng: np.random.Generator,
    params: LnsParams | None = None,
    *,
    travel_set: TravelSet | None = None,
) -> tuple[Solution, tuple[Robot, ...]]:
    """Buy uniformly random affordable robots until nothing is affordable.

    Tours for the resulting fleet come from :func:`fixed_fleet_mrta`, seeded
    from *rng*.  The tour seed is drawn before the fleet, so two runs from
    equal generators share it whatever their budgets.
    """
    settings = params if params is not None else LnsParams()
    inner_seed = int(rng.integers(np.iinfo(np.int64).max))
    base = build_base_fleet(problem)
    taken: set[int] = set()
    fleet: list[Robot] = []
    remaining = problem.budget
    while True:
        affordable = [rt for rt in problem.robot_types if rt.deploy_cost <= remaining]
        if not affordable:
            break
        rtype = affordable[int(rng.integers(len(affordable)))]
        robot = _next_copy(base, rtype.id, taken)
        taken.add(robot.robot_index)
        fleet.append(robot)
        remaining -= rtype.deploy_cost

    solution = fixed_fleet_mrta(
        problem, fleet, settings.with_seed(inner_seed), travel_set=travel_set, base_fleet=base
    )
    logger.info(
        "random_fleet_finished",
        scenario=problem.name,
        reward=solution.visit_count(),
        fleet_size=len(fleet),
    )
    return solution, tuple(fleet)


class GreedySolver(BaseSolver):
    """Greedy fleet construction behind the common solver interface."""

    method = Method.GREEDY

    def solve(
        self,
        problem: Problem,
        params: LnsParams,
        *,
        travel_set: TravelSet | None = None,
    ) -> SolverOutput:
        solution, trace = greedy_fleet(problem, params, travel_set=travel_set)
        return SolverOutput(
            method=self.method,
            solution=solution,
            fleet=tuple(trace.fleet),
            reward=solution.visit_count(),
            iterations=params.iterations,
            trace=trace,
        )


class RandomFleetSolver(BaseSolver):
    """Random fleet selection behind the common solver interface."""

    method = Method.RANDOM

    def solve(
        self,
        problem: Problem,
        params: LnsParams,
        *,
        travel_set: TravelSet | None = None,
    ) -> SolverOutput:
        solution, fleet = random_fleet(
            problem, make_rng(params.seed), params, travel_set=travel_set
        )
        return SolverOutput(
            method=self.method,
            solution=solution,
            fleet=fleet,
            reward=solution.visit_count(),
            iterations=params.iterations,
        )
