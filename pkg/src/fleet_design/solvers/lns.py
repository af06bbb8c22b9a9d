"""Fleet large neighbourhood search.

The search keeps one tour per base-fleet robot and chooses the fleet and the
tours jointly: a robot is deployed exactly when its tour is nonempty.  Each
iteration destroys part of the current solution with one of two removal
operators, re-inserts unserved tasks greedily by a noisy utility, and keeps
the result under a simulated-annealing acceptance rule.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass

import numpy as np
import structlog

from fleet_design.models.enums import DiscountDenominator, Method, RemovalMode
from fleet_design.models.params import LnsParams
from fleet_design.models.problem import BaseFleet, Problem, Robot
from fleet_design.models.solution import Solution, Tour
from fleet_design.pathing import TravelSet
from fleet_design.seeding import make_rng
from fleet_design.solvers.base import BaseSolver, SolverOutput
from fleet_design.solvers.context import InsertionCandidate, SolverContext

logger = structlog.get_logger(__name__)

INITIAL_MODE = "initial"


@dataclass(frozen=True)
class RemovalOutcome:
    """Partial solution left by a removal operator and the tasks it freed."""

    partial_solution: Solution
    unassigned: frozenset[int]


@dataclass(frozen=True)
class IterationRecord:
    """One row of the iteration log."""

    iteration: int
    mode: str
    current_reward: int
    best_reward: int
    accepted: bool

    def as_row(self) -> dict[str, object]:
        return {
            "iteration": self.iteration,
            "mode": self.mode,
            "current_reward": self.current_reward,
            "best_reward": self.best_reward,
            "accepted": int(self.accepted),
        }


ITERATION_LOG_COLUMNS = ("iteration", "mode", "current_reward", "best_reward", "accepted")

IterationObserver = Callable[[IterationRecord, Solution], None]


@dataclass(frozen=True)
class LnsResult:
    """Best solution found, its deployed fleet and the iteration log."""

    solution: Solution
    fleet: tuple[Robot, ...]
    reward: int
    log: tuple[IterationRecord, ...]

    @property
    def iterations(self) -> int:
        return len(self.log) - 1


# ---------------------------------------------------------------------------
# Removal
# ---------------------------------------------------------------------------


def select_removal_mode(rng: np.random.Generator, params: LnsParams) -> RemovalMode:
    """Robot removal with probability ``removal_mode_bias``, task removal otherwise."""
    if rng.random() < params.removal_mode_bias:
        return RemovalMode.ROBOT_REMOVAL
    return RemovalMode.TASK_REMOVAL


def robot_removal(
    solution: Solution, params: LnsParams, rng: np.random.Generator
) -> RemovalOutcome:
    """Empty the tours of a random subset of the active robots.

    The subset size is uniform in ``1 .. max(1, floor(robot_removal_max_pct% * active))``.
    """
    active = list(solution.active_robots())
    if not active:
        return RemovalOutcome(solution, frozenset())

    limit = max(1, math.floor(params.robot_removal_max_pct * len(active) / 100))
    count = int(rng.integers(1, limit + 1))
    chosen = {int(i) for i in rng.choice(active, size=count, replace=False)}

    freed: set[int] = set()
    tours: list[Tour] = []
    for tour in solution.tours:
        if tour.robot_index in chosen:
            freed.update(tour.visits)
            tours.append(Tour(robot_index=tour.robot_index))
        else:
            tours.append(tour)
    return RemovalOutcome(Solution(tours=tuple(tours)), frozenset(freed))


def task_removal(
    solution: Solution, params: LnsParams, rng: np.random.Generator
) -> RemovalOutcome:
    """Drop up to ``task_removal_max_pct`` percent of the visits of every nonempty tour.

    The remaining visits keep their relative order.
    """
    freed: set[int] = set()
    tours: list[Tour] = []
    for tour in solution.tours:
        size = len(tour.visits)
        if size == 0:
            tours.append(tour)
            continue
        limit = math.floor(params.task_removal_max_pct * size / 100)
        count = int(rng.integers(0, limit + 1))
        if count == 0:
            tours.append(tour)
            continue
        dropped = {int(p) for p in rng.choice(size, size=count, replace=False)}
        kept = tuple(t for p, t in enumerate(tour.visits) if p not in dropped)
        freed.update(t for p, t in enumerate(tour.visits) if p in dropped)
        tours.append(Tour(robot_index=tour.robot_index, visits=kept))
    return RemovalOutcome(Solution(tours=tuple(tours)), frozenset(freed))


# ---------------------------------------------------------------------------
# Repair
# ---------------------------------------------------------------------------


def utility(
    candidate: InsertionCandidate | None,
    rng: np.random.Generator,
    params: LnsParams,
    *,
    discount_enabled: bool = True,
) -> float:
    """Noisy, possibly discounted marginal gain of an insertion.

    Every feasible insertion services exactly one more task, so the gain is
    1.  When the insertion would deploy an idle robot, the gain is divided by
    the robot's cost (or battery) with probability ``discount_prob``.
    Infeasible candidates (``None``) score 0 and consume no randomness.
    """
    if candidate is None:
        return 0.0
    discount = 1.0
    if discount_enabled and candidate.activates and rng.random() < params.discount_prob:
        if params.discount_denominator is DiscountDenominator.BATTERY:
            discount = 1.0 / float(candidate.rtype.battery)
        else:
            discount = 1.0 / float(candidate.rtype.deploy_cost)
    noise = rng.uniform(0.0, params.noise_max) if params.noise_max > 0 else 0.0
    return (1.0 + noise) * discount * 1.0


def _pop_random(pool: list[int], rng: np.random.Generator) -> int:
    index = int(rng.integers(len(pool)))
    pool[index], pool[-1] = pool[-1], pool[index]
    return pool.pop()


def repair(
    partial: Solution,
    problem: Problem,
    travel_set: TravelSet,
    unassigned: Iterable[int],
    params: LnsParams,
    rng: np.random.Generator,
    *,
    context: SolverContext | None = None,
) -> Solution:
    """Re-insert *unassigned* tasks one at a time, in random order.

    For every popped task each robot proposes its cheapest feasible
    insertion; the insertion with the highest utility wins, ties going to the
    smaller added duration and then to the lower robot.  Tasks nobody can
    take stay unserved for this call.  Existing visits are never removed.

    A ``set`` of tasks is visited in sorted order before the random pops, so
    the result only depends on *rng*; a list keeps its given order.
    """
    ctx = context if context is not None else SolverContext.build(problem, travel_set)
    pool = sorted(unassigned) if isinstance(unassigned, (set, frozenset)) else list(unassigned)
    if not pool:
        return partial

    tours = ctx.local_tours(partial)
    timings = [ctx.timing(r, tour) for r, tour in enumerate(tours)]
    active_cost = ctx.active_cost(tours)
    discount_enabled = not ctx.fixed_fleet

    while pool:
        task = _pop_random(pool, rng)
        best: InsertionCandidate | None = None
        best_key: tuple[float, int, int] | None = None
        for r, tour in enumerate(tours):
            candidate = ctx.best_insertion(r, tour, timings[r], task, active_cost)
            score = utility(candidate, rng, params, discount_enabled=discount_enabled)
            if candidate is None or score <= 0:
                continue
            key = (-score, candidate.added_duration, r)
            if best_key is None or key < best_key:
                best, best_key = candidate, key
        if best is None:
            continue
        tours[best.robot].insert(best.position, task)
        timings[best.robot] = ctx.timing(best.robot, tours[best.robot])
        if best.activates:
            active_cost += ctx.costs[best.robot]

    return ctx.to_solution(tours)


def initial_solution(
    problem: Problem,
    base_fleet: BaseFleet,
    travel_set: TravelSet,
    rng: np.random.Generator,
    params: LnsParams | None = None,
    *,
    context: SolverContext | None = None,
) -> Solution:
    """Random feasible start: shuffle all tasks and repair the empty solution."""
    settings = params if params is not None else LnsParams()
    ctx = (
        context
        if context is not None
        else SolverContext.build(problem, travel_set, base_fleet)
    )
    order = [int(t) for t in rng.permutation(problem.num_tasks)]
    empty = ctx.to_solution(ctx.empty_tours())
    return repair(empty, problem, travel_set, order, settings, rng, context=ctx)


# ---------------------------------------------------------------------------
# Acceptance
# ---------------------------------------------------------------------------


def temperature(iteration: int, params: LnsParams) -> float:
    """Geometric cooling: ``T0 * c**k``."""
    return params.sa_initial_temp * params.sa_cooling**iteration


def accept(
    new: Solution,
    current: Solution,
    iteration: int,
    params: LnsParams,
    rng: np.random.Generator,
) -> bool:
    """Simulated-annealing acceptance on the reward difference.

    Both solutions must be feasible, so their reward is their visit count.
    Randomness is drawn only when *new* is worse.
    """
    delta = new.visit_count() - current.visit_count()
    if delta >= 0:
        return True
    temp = temperature(iteration, params)
    if temp <= 0:
        return False
    return bool(rng.random() < math.exp(delta / temp))


# ---------------------------------------------------------------------------
# Main loop
# ---------------------------------------------------------------------------


def _unserved(solution: Solution, num_tasks: int) -> set[int]:
    return set(range(num_tasks)).difference(solution.visited_tasks())


def solve(
    problem: Problem,
    params: LnsParams,
    *,
    travel_set: TravelSet | None = None,
    context: SolverContext | None = None,
    observer: IterationObserver | None = None,
) -> LnsResult:
    """Run the fleet LNS for ``params.iterations`` iterations.

    Each iteration repairs with the freed tasks plus every task that is
    currently unserved.  The best solution is replaced only on a strict
    reward improvement, so the earliest best is kept.

    Parameters
    ----------
    problem:
        Instance to solve.
    params:
        Search parameters, including the seed.
    travel_set, context:
        Precomputed travel matrices or a compiled context.  A context built
        with ``fixed_fleet=True`` restricts the search to its robots.
    observer:
        Called after every iteration with the log record and the current
        (accepted) solution.

    Returns
    -------
    LnsResult
        Best solution, the robots with nonempty tours in it, and the log.
    """
    ctx = context if context is not None else SolverContext.build(problem, travel_set)
    rng = make_rng(params.seed)

    current = initial_solution(
        problem, ctx.base_fleet, ctx.travel_set, rng, params, context=ctx
    )
    current_reward = current.visit_count()
    best, best_reward = current, current_reward
    log = [IterationRecord(0, INITIAL_MODE, current_reward, best_reward, True)]
    if observer is not None:
        observer(log[0], current)

    for k in range(1, params.iterations + 1):
        mode = select_removal_mode(rng, params)
        if mode is RemovalMode.ROBOT_REMOVAL:
            outcome = robot_removal(current, params, rng)
        else:
            outcome = task_removal(current, params, rng)
        pool = _unserved(outcome.partial_solution, problem.num_tasks)
        candidate = repair(
            outcome.partial_solution, problem, ctx.travel_set, pool, params, rng, context=ctx
        )
        candidate_reward = candidate.visit_count()
        if candidate_reward > best_reward:
            best, best_reward = candidate, candidate_reward
        accepted = accept(candidate, current, k, params, rng)
        if accepted:
            current, current_reward = candidate, candidate_reward

        record = IterationRecord(k, mode.value, current_reward, best_reward, accepted)
        log.append(record)
        logger.debug(
            "lns_iteration",
            iteration=k,
            mode=mode.value,
            current_reward=current_reward,
            best_reward=best_reward,
            accepted=accepted,
        )
        if observer is not None:
            observer(record, current)

    fleet = tuple(ctx.base_fleet.robots[i] for i in best.active_robots())
    logger.info(
        "lns_finished",
        scenario=problem.name,
        best_reward=best_reward,
        fleet_size=len(fleet),
        iterations=params.iterations,
        fixed_fleet=ctx.fixed_fleet,
    )
    return LnsResult(solution=best, fleet=fleet, reward=best_reward, log=tuple(log))


class LnsSolver(BaseSolver):
    """Fleet LNS behind the common solver interface."""

    method = Method.LNS

    def solve(
        self,
        problem: Problem,
        params: LnsParams,
        *,
        travel_set: TravelSet | None = None,
    ) -> SolverOutput:
        result = solve(problem, params, travel_set=travel_set)
        return SolverOutput(
            method=self.method,
            solution=result.solution,
            fleet=result.fleet,
            reward=result.reward,
            iterations=result.iterations,
            log=result.log,
        )
