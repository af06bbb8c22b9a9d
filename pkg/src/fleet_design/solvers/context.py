"""Integer-scaled view of a problem used inside the solvers.

All finite travel times are multiplied by the least common multiple of their
denominators and all money by the LCM of the cost and budget denominators.
Comparisons are then exact integer comparisons, which keeps the insertion
checks of the repair step cheap without giving up exactness.  Deadlines and
batteries are floored after scaling: arrival times are integers, so
``arrival <= x`` holds exactly when ``arrival <= floor(x)``.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from fleet_design.evaluation import build_base_fleet
from fleet_design.models.problem import BaseFleet, Problem, Robot, RobotType
from fleet_design.models.solution import Solution, Tour
from fleet_design.pathing import TravelSet, build_travel_set

Scaled = int | float  # float only for math.inf


@dataclass(frozen=True)
class TourTiming:
    """Arrival times, duration and deadline slack of one working tour.

    ``slack[p]`` is the largest delay that visits ``p..`` can absorb
    without missing a deadline; ``slack[len(visits)]`` is infinite.
    """

    arrivals: tuple[int, ...]
    duration: int
    slack: tuple[Scaled, ...]


@dataclass(frozen=True)
class InsertionCandidate:
    """Cheapest feasible position for a task in one robot's tour."""

    robot: int  # local index into SolverContext.robots
    position: int
    added_duration: int
    activates: bool
    rtype: RobotType


@dataclass(frozen=True)
class SolverContext:
    """Problem data compiled for one solver run.

    ``robots`` lists the robots the solver may assign tasks to, in local
    order.  For the fleet LNS this is the whole base fleet.  With
    ``fixed_fleet`` the given robots are treated as already deployed: the
    budget is not checked and idle robots are not discounted.
    """

    problem: Problem
    base_fleet: BaseFleet
    travel_set: TravelSet
    robots: tuple[Robot, ...]
    fixed_fleet: bool
    time_scale: int
    money_scale: int
    legs: tuple[tuple[tuple[Scaled, ...], ...], ...]
    deadlines: tuple[Scaled, ...]
    batteries: tuple[int, ...]
    costs: tuple[int, ...]
    budget: int
    capable: tuple[tuple[bool, ...], ...]

    @classmethod
    def build(
        cls,
        problem: Problem,
        travel_set: TravelSet | None = None,
        base_fleet: BaseFleet | None = None,
        robots: Sequence[Robot] | None = None,
        fixed_fleet: bool = False,
    ) -> SolverContext:
        travel = travel_set if travel_set is not None else build_travel_set(problem)
        fleet = base_fleet if base_fleet is not None else build_base_fleet(problem)
        members = tuple(robots) if robots is not None else fleet.robots

        denominators = [
            entry.denominator for matrix in travel.values() for entry in matrix.finite_entries()
        ]
        time_scale = math.lcm(*denominators) if denominators else 1
        money_scale = math.lcm(
            problem.budget.denominator,
            *(rt.deploy_cost.denominator for rt in problem.robot_types),
        )

        def scale_time(value: Fraction | float) -> Scaled:
            if isinstance(value, float):
                return math.inf
            return math.floor(value * time_scale)

        type_legs = {
            type_id: tuple(tuple(scale_time(t) for t in row) for row in matrix.times)
            for type_id, matrix in travel.items()
        }
        member_types = [problem.type_of(robot) for robot in members]
        return cls(
            problem=problem,
            base_fleet=fleet,
            travel_set=travel,
            robots=members,
            fixed_fleet=fixed_fleet,
            time_scale=time_scale,
            money_scale=money_scale,
            legs=tuple(type_legs[rt.id] for rt in member_types),
            deadlines=tuple(scale_time(task.deadline) for task in problem.tasks),
            batteries=tuple(math.floor(rt.battery * time_scale) for rt in member_types),
            costs=tuple(int(rt.deploy_cost * money_scale) for rt in member_types),
            budget=math.floor(problem.budget * money_scale),
            capable=tuple(
                tuple(rt.can_service(task) for task in problem.tasks) for rt in member_types
            ),
        )

    # ------------------------------------------------------------------
    # Conversions between Solution and local working tours
    # ------------------------------------------------------------------

    def local_tours(self, solution: Solution) -> list[list[int]]:
        return [list(solution.tours[robot.robot_index].visits) for robot in self.robots]

    def to_solution(self, tours: Sequence[Sequence[int]]) -> Solution:
        visits: list[tuple[int, ...]] = [() for _ in self.base_fleet.robots]
        for robot, tour in zip(self.robots, tours, strict=True):
            visits[robot.robot_index] = tuple(tour)
        return Solution(
            tours=tuple(Tour(robot_index=i, visits=v) for i, v in enumerate(visits))
        )

    def empty_tours(self) -> list[list[int]]:
        return [[] for _ in self.robots]

    # ------------------------------------------------------------------
    # Timing and insertion
    # ------------------------------------------------------------------

    def timing(self, robot: int, visits: Sequence[int]) -> TourTiming:
        legs = self.legs[robot]
        arrivals: list[int] = []
        clock: Scaled = 0
        here = 0
        for task in visits:
            clock += legs[here][task + 1]
            arrivals.append(clock)  # type: ignore[arg-type]
            here = task + 1
        duration = clock + legs[here][0] if visits else 0

        slack: list[Scaled] = [math.inf] * (len(visits) + 1)
        for p in range(len(visits) - 1, -1, -1):
            slack[p] = min(slack[p + 1], self.deadlines[visits[p]] - arrivals[p])
        return TourTiming(  # type: ignore[arg-type]
            arrivals=tuple(arrivals), duration=duration, slack=tuple(slack)
        )

    def active_cost(self, tours: Sequence[Sequence[int]]) -> int:
        return sum(cost for cost, tour in zip(self.costs, tours, strict=True) if tour)

    def best_insertion(
        self,
        robot: int,
        visits: Sequence[int],
        timing: TourTiming,
        task: int,
        active_cost: int,
    ) -> InsertionCandidate | None:
        """Cheapest feasible insertion of *task* into *robot*'s tour, if any.

        Feasible means: the robot has the task's requirements, every deadline
        on the modified tour is met, the battery covers the longer tour, and
        (unless the fleet is fixed) activating an idle robot stays within
        budget.  Ties in added duration go to the earliest position.
        """
        if not self.capable[robot][task]:
            return None
        activates = not visits
        if activates and not self.fixed_fleet and active_cost + self.costs[robot] > self.budget:
            return None

        legs = self.legs[robot]
        node = task + 1
        deadline = self.deadlines[task]
        headroom = self.batteries[robot] - timing.duration
        best_position = -1
        best_added: Scaled = math.inf

        prev = 0
        arrival_prev = 0
        count = len(visits)
        for position in range(count + 1):
            nxt = visits[position] + 1 if position < count else 0
            to_task = legs[prev][node]
            if arrival_prev + to_task > deadline:
                # arrivals only grow along the tour (triangle inequality)
                break
            added = to_task + legs[node][nxt] - legs[prev][nxt]
            if added < best_added and added <= timing.slack[position] and added <= headroom:
                best_added = added
                best_position = position
            if position < count:
                prev = nxt
                arrival_prev = timing.arrivals[position]

        if best_position < 0:
            return None
        return InsertionCandidate(
            robot=robot,
            position=best_position,
            added_duration=int(best_added),
            activates=activates,
            rtype=self.problem.type_of(self.robots[robot]),
        )
