"""Exhaustive optimum for tiny instances.

Two dynamic programs, both exact:

1. Per robot type, a Held-Karp recursion over task subsets finds for every
   subset the ordering with the earliest arrivals that meets all deadlines,
   and keeps the subset if the return to the depot fits the battery.
2. Over the base-fleet robots in index order, a memoised recursion chooses
   for each robot either nothing or one still-free serviceable subset,
   subject to the budget.

Robots of one type are interchangeable and arrivals only matter through
deadlines, so this covers every fleet, assignment and visiting order.
"""

from __future__ import annotations

import functools
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import structlog
from pydantic import BaseModel, Field

from fleet_design.config import Settings
from fleet_design.errors import SizeExceeded
from fleet_design.evaluation import build_base_fleet
from fleet_design.models.enums import Method
from fleet_design.models.params import LnsParams
from fleet_design.models.problem import Problem, Robot, RobotType
from fleet_design.models.quantities import MODEL_CONFIG
from fleet_design.models.solution import Solution, Tour
from fleet_design.pathing import (
    DEPOT_NODE,
    TravelMatrix,
    TravelSet,
    build_travel_set,
    task_node,
)
from fleet_design.solvers.base import BaseSolver, SolverOutput

logger = structlog.get_logger(__name__)


class OracleLimits(BaseModel):
    """Size guards checked before any enumeration starts."""

    model_config = MODEL_CONFIG

    max_tasks: int = Field(default=6, ge=0)
    max_base_fleet: int = Field(default=8, ge=0)
    max_states: int = Field(default=2_000_000, ge=1, description="Bound on robots × 2^N.")

    @classmethod
    def from_settings(cls, settings: Settings) -> OracleLimits:
        return cls(
            max_tasks=settings.oracle_max_tasks,
            max_base_fleet=settings.oracle_max_base_fleet,
            max_states=settings.oracle_max_states,
        )


@dataclass(frozen=True)
class BruteForceResult:
    """Optimal reward, one optimal solution and its deployed robots."""

    reward: int
    solution: Solution
    fleet: tuple[Robot, ...]


def serviceable_orders(
    problem: Problem, rtype: RobotType, travel: TravelMatrix
) -> dict[int, tuple[int, ...]]:
    """Every task subset one robot of *rtype* can serve, with a valid order.

    Keys are bitmasks over task ids; the empty mask maps to ``()``.
    """
    n = problem.num_tasks
    capable = [rtype.can_service(task) for task in problem.tasks]
    deadlines = [task.deadline for task in problem.tasks]

    # earliest[mask][j]: earliest arrival at task j after visiting exactly mask, ending at j
    earliest: dict[int, dict[int, Fraction]] = {}
    parent: dict[tuple[int, int], int] = {}
    for j in range(n):
        if not capable[j]:
            continue
        leg = travel.time(DEPOT_NODE, task_node(j))
        if leg <= deadlines[j]:
            earliest.setdefault(1 << j, {})[j] = leg  # type: ignore[assignment]
            parent[(1 << j, j)] = -1

    for mask in range(1, 1 << n):
        ends = earliest.get(mask)
        if not ends:
            continue
        for j, arrival in ends.items():
            for nxt in range(n):
                if mask & (1 << nxt) or not capable[nxt]:
                    continue
                reach = arrival + travel.time(task_node(j), task_node(nxt))
                if reach > deadlines[nxt]:
                    continue
                grown = mask | (1 << nxt)
                slot = earliest.setdefault(grown, {})
                if nxt not in slot or reach < slot[nxt]:
                    slot[nxt] = reach  # type: ignore[assignment]
                    parent[(grown, nxt)] = j

    orders: dict[int, tuple[int, ...]] = {0: ()}
    for mask, ends in earliest.items():
        best_end, best_duration = -1, None
        for j, arrival in sorted(ends.items()):
            duration = arrival + travel.time(task_node(j), DEPOT_NODE)
            if duration <= rtype.battery and (best_duration is None or duration < best_duration):
                best_end, best_duration = j, duration
        if best_end < 0:
            continue
        sequence: list[int] = []
        cursor, end = mask, best_end
        while end >= 0:
            sequence.append(end)
            previous = parent[(cursor, end)]
            cursor &= ~(1 << end)
            end = previous
        orders[mask] = tuple(reversed(sequence))
    return orders


def _check_limits(problem: Problem, fleet_size: int, limits: OracleLimits) -> None:
    n = problem.num_tasks
    if n > limits.max_tasks:
        raise SizeExceeded("max_tasks", n, limits.max_tasks)
    if fleet_size > limits.max_base_fleet:
        raise SizeExceeded("max_base_fleet", fleet_size, limits.max_base_fleet)
    states = fleet_size * (1 << n)
    if states > limits.max_states:
        raise SizeExceeded("max_states", states, limits.max_states)


def brute_force(
    problem: Problem,
    limits: OracleLimits | None = None,
    *,
    travel_set: TravelSet | None = None,
    fleet: Sequence[Robot] | None = None,
) -> BruteForceResult:
    """Maximum number of serviceable tasks and a solution attaining it.

    With *fleet* the robots are given and the budget is ignored, which makes
    this the exact counterpart of the fixed-fleet tour optimiser.  Among
    optimal solutions the first in enumeration order (robots by index,
    subsets by increasing bitmask, "idle" first) is returned.

    Raises:
        SizeExceeded: If the task count, the number of robots or the state
            count ``robots × 2^N`` exceeds *limits*.
    """
    guard = limits if limits is not None else OracleLimits()
    base = build_base_fleet(problem)
    robots = tuple(fleet) if fleet is not None else base.robots
    _check_limits(problem, len(robots), guard)
    enforce_budget = fleet is None

    travel = travel_set if travel_set is not None else build_travel_set(problem)
    used_types = sorted({r.type_ref for r in robots})
    orders = {
        t: serviceable_orders(problem, problem.robot_types[t], travel[t]) for t in used_types
    }
    options = {t: sorted(orders[t]) for t in used_types}
    costs = [problem.type_of(r).deploy_cost for r in robots]

    @functools.lru_cache(maxsize=None)
    def best(k: int, used: int, spent: Fraction) -> tuple[int, tuple[int, ...]]:
        if k == len(robots):
            return 0, ()
        type_id = robots[k].type_ref
        top, top_plan = -1, ()
        for mask in options[type_id]:
            if mask & used:
                continue
            cost = costs[k] if mask else Fraction(0)
            if enforce_budget and spent + cost > problem.budget:
                continue
            rest, rest_plan = best(k + 1, used | mask, spent + cost)
            value = mask.bit_count() + rest
            if value > top:
                top, top_plan = value, (mask, *rest_plan)
        return top, top_plan

    reward, plan = best(0, 0, Fraction(0))
    best.cache_clear()

    visits: list[tuple[int, ...]] = [() for _ in base.robots]
    for robot, mask in zip(robots, plan, strict=True):
        visits[robot.robot_index] = orders[robot.type_ref][mask]
    solution = Solution(tours=tuple(Tour(robot_index=i, visits=v) for i, v in enumerate(visits)))
    deployed = tuple(base.robots[i] for i in solution.active_robots())
    logger.info(
        "brute_force_finished",
        scenario=problem.name,
        reward=reward,
        robots=len(robots),
        tasks=problem.num_tasks,
    )
    return BruteForceResult(reward=reward, solution=solution, fleet=deployed)


class OracleSolver(BaseSolver):
    """Brute-force optimum behind the common solver interface."""

    method = Method.ORACLE

    def __init__(self, limits: OracleLimits | None = None) -> None:
        self.limits = limits if limits is not None else OracleLimits()

    def solve(
        self,
        problem: Problem,
        params: LnsParams,
        *,
        travel_set: TravelSet | None = None,
    ) -> SolverOutput:
        del params  # exhaustive search has no knobs
        result = brute_force(problem, self.limits, travel_set=travel_set)
        return SolverOutput(
            method=self.method,
            solution=result.solution,
            fleet=result.fleet,
            reward=result.reward,
        )
