"""Base fleet construction, tour schedules, feasibility and the reward functional.

These functions are the reference semantics every solver is checked
against.  They work on the exact :class:`~fractions.Fraction` travel
matrices; solvers use the integer-scaled mirror in
:mod:`fleet_design.solvers.context` for speed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from fleet_design.errors import InfeasibleSolution, UnreachableVertex
from fleet_design.models.enums import ViolationKind
from fleet_design.models.problem import BaseFleet, Problem, Robot
from fleet_design.models.solution import Solution, Tour
from fleet_design.pathing import DEPOT_NODE, TravelMatrix, TravelSet, task_node


def build_base_fleet(problem: Problem) -> BaseFleet:
    """Return ⌈B / b_i⌉ robots of every type, ordered by (type id, copy index)."""
    robots: list[Robot] = []
    for rtype in problem.robot_types:
        copies = math.ceil(problem.budget / rtype.deploy_cost)
        for _ in range(copies):
            robots.append(Robot(robot_index=len(robots), type_ref=rtype.id))
    return BaseFleet(robots=tuple(robots))


@dataclass(frozen=True)
class Schedule:
    """Arrival time of every visit of a tour and its depot-to-depot duration."""

    arrivals: tuple[tuple[int, Fraction], ...] = ()
    duration: Fraction = Fraction(0)


def tour_schedule(tour: Tour, problem: Problem, travel: TravelMatrix) -> Schedule:
    """Compute arrival times along *tour* and its total duration.

    Service takes no time, so the arrival at the k-th visit is the sum of the
    legs depot → v₁ → … → v_k.  The duration includes the leg back to the
    depot.

    Raises:
        UnreachableVertex: If any leg has infinite travel time.
    """
    del problem  # node numbering is fixed by task ids
    clock = Fraction(0)
    arrivals: list[tuple[int, Fraction]] = []
    here = DEPOT_NODE
    for task_id in tour.visits:
        there = task_node(task_id)
        leg = travel.time(here, there)
        if isinstance(leg, float):
            raise UnreachableVertex(tour.robot_index, here, there)
        clock += leg
        arrivals.append((task_id, clock))
        here = there
    if tour.visits:
        back = travel.time(here, DEPOT_NODE)
        if isinstance(back, float):
            raise UnreachableVertex(tour.robot_index, here, DEPOT_NODE)
        clock += back
    return Schedule(arrivals=tuple(arrivals), duration=clock)


@dataclass(frozen=True)
class Violation:
    """A single failed constraint."""

    kind: ViolationKind
    detail: str
    robot_index: int | None = None
    task_id: int | None = None

    def __str__(self) -> str:
        return f"{self.kind.value}: {self.detail}"


@dataclass(frozen=True)
class FeasibilityReport:
    """Verdict of :func:`is_feasible`; feasible iff no violations were found."""

    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def feasible(self) -> bool:
        return not self.violations

    def kinds(self) -> set[ViolationKind]:
        return {v.kind for v in self.violations}


def is_feasible(
    solution: Solution,
    problem: Problem,
    travel_set: TravelSet,
    base_fleet: BaseFleet | None = None,
) -> FeasibilityReport:
    """Check budget, battery, capability, deadline and uniqueness constraints.

    Infeasibility is reported, never raised.  The check stops early only
    when the tours cannot be matched to the base fleet at all.
    """
    fleet = base_fleet if base_fleet is not None else build_base_fleet(problem)
    violations: list[Violation] = []

    if len(solution.tours) != len(fleet):
        violations.append(
            Violation(
                ViolationKind.FLEET_MISMATCH,
                f"{len(solution.tours)} tours for a base fleet of {len(fleet)} robots",
            )
        )
        return FeasibilityReport(tuple(violations))
    for position, tour in enumerate(solution.tours):
        if tour.robot_index != position:
            violations.append(
                Violation(
                    ViolationKind.FLEET_MISMATCH,
                    f"tour at position {position} belongs to robot {tour.robot_index}",
                    robot_index=tour.robot_index,
                )
            )
    unknown = sorted({t for t in solution.visited_tasks() if t >= problem.num_tasks})
    for task_id in unknown:
        violations.append(
            Violation(ViolationKind.UNKNOWN_TASK, f"task {task_id} does not exist", task_id=task_id)
        )
    if violations:
        return FeasibilityReport(tuple(violations))

    # (e) each task in at most one tour
    owner: dict[int, int] = {}
    for tour in solution.tours:
        for task_id in tour.visits:
            if task_id in owner:
                violations.append(
                    Violation(
                        ViolationKind.DUPLICATE_TASK,
                        f"task {task_id} visited by robots {owner[task_id]} and {tour.robot_index}",
                        robot_index=tour.robot_index,
                        task_id=task_id,
                    )
                )
            else:
                owner[task_id] = tour.robot_index

    # (a) budget over active robots
    spent = sum(
        (
            problem.type_of(fleet.robots[t.robot_index]).deploy_cost
            for t in solution.tours
            if t.active
        ),
        Fraction(0),
    )
    if spent > problem.budget:
        violations.append(
            Violation(ViolationKind.BUDGET, f"active fleet costs {spent} > budget {problem.budget}")
        )

    for tour in solution.tours:
        if not tour.active:
            continue
        robot = fleet.robots[tour.robot_index]
        rtype = problem.type_of(robot)

        # (c) capabilities
        for task_id in tour.visits:
            if not rtype.can_service(problem.tasks[task_id]):
                violations.append(
                    Violation(
                        ViolationKind.CAPABILITY,
                        f"robot {robot.robot_index} (type {rtype.id}) lacks requirements "
                        f"of task {task_id}",
                        robot_index=robot.robot_index,
                        task_id=task_id,
                    )
                )

        try:
            schedule = tour_schedule(tour, problem, travel_set[rtype.id])
        except UnreachableVertex as exc:
            violations.append(
                Violation(ViolationKind.UNREACHABLE, str(exc), robot_index=robot.robot_index)
            )
            continue

        # (d) deadlines
        for task_id, arrival in schedule.arrivals:
            deadline = problem.tasks[task_id].deadline
            if arrival > deadline:
                violations.append(
                    Violation(
                        ViolationKind.DEADLINE,
                        f"robot {robot.robot_index} reaches task {task_id} at {arrival} "
                        f"after its deadline {deadline}",
                        robot_index=robot.robot_index,
                        task_id=task_id,
                    )
                )

        # (b) battery
        if schedule.duration > rtype.battery:
            violations.append(
                Violation(
                    ViolationKind.BATTERY,
                    f"robot {robot.robot_index} tour lasts {schedule.duration} "
                    f"> battery {rtype.battery}",
                    robot_index=robot.robot_index,
                )
            )

    return FeasibilityReport(tuple(violations))


def evaluate_reward(
    solution: Solution,
    problem: Problem,
    travel_set: TravelSet,
    base_fleet: BaseFleet | None = None,
) -> int:
    """Number of distinct tasks serviced on time (the reward ρ).

    Raises:
        InfeasibleSolution: If *solution* fails :func:`is_feasible`.
    """
    report = is_feasible(solution, problem, travel_set, base_fleet)
    if not report.feasible:
        raise InfeasibleSolution([str(v) for v in report.violations])
    return len(set(solution.visited_tasks()))


def fleet_cost(solution: Solution, problem: Problem, base_fleet: BaseFleet) -> Fraction:
    """Deployment cost of the robots with nonempty tours."""
    return sum(
        (problem.type_of(base_fleet.robots[i]).deploy_cost for i in solution.active_robots()),
        Fraction(0),
    )


def fleet_composition(
    robot_indices: tuple[int, ...] | list[int], base_fleet: BaseFleet
) -> dict[int, int]:
    """Robots per type id among *robot_indices*, sorted by type id."""
    counts: dict[int, int] = {}
    for index in robot_indices:
        type_id = base_fleet.robots[index].type_ref
        counts[type_id] = counts.get(type_id, 0) + 1
    return dict(sorted(counts.items()))
