"""Mixed-integer linear model of the budgeted fleet design problem.

The model is a team-orienteering formulation with time windows over the
meta-graph of the depot and the tasks, with one vehicle index per base-fleet
robot:

- nodes ``0 .. N+1`` where ``0`` is the depot, ``1..N`` are the tasks and
  ``N+1`` is a copy of the depot at which every tour ends;
- ``x_i_j_k`` robot *k* drives arc (i, j), ``y_i_k`` robot *k* serves task
  *i*, ``z_k`` robot *k* is deployed (all binary);
- ``s_i_k`` time at which robot *k* reaches node *i* (continuous, >= 0).

Robot indices *k* start at 1.  Constraint names carry the family id followed
by the node and robot indices: ``c3b`` depot departure and arrival, ``c3c``
flow coupled to service, ``c3d`` time propagation, ``c3e`` single service,
``c3f`` capability, ``c3g`` deadline, ``c3h`` battery and ``c3i`` budget.
Every row is scaled to integer coefficients before it is stored.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, replace
from fractions import Fraction

import structlog

from fleet_design.evaluation import build_base_fleet
from fleet_design.models.problem import Problem
from fleet_design.pathing import TravelSet, TravelTime, build_travel_set

logger = structlog.get_logger(__name__)

LE = "<="
GE = ">="
EQ = "="

Terms = tuple[tuple[Fraction, str], ...]


@dataclass(frozen=True)
class Variable:
    """A model column; binaries have bounds 0..1 unless fixed to 0."""

    name: str
    binary: bool
    lower: Fraction = Fraction(0)
    upper: Fraction | None = None

    @property
    def fixed(self) -> bool:
        return self.upper is not None and self.upper == self.lower


@dataclass(frozen=True)
class Constraint:
    """A named linear row ``sum(coef * var) <sense> rhs``."""

    name: str
    terms: Terms
    sense: str
    rhs: Fraction

    @property
    def family(self) -> str:
        return self.name.split("_", 1)[0]


@dataclass(frozen=True)
class MilpModel:
    """Objective (maximised), rows and the variable table of one instance."""

    name: str
    objective: Terms
    constraints: tuple[Constraint, ...]
    variables: tuple[Variable, ...]
    big_m: Fraction

    def variable(self, name: str) -> Variable:
        for var in self.variables:
            if var.name == name:
                return var
        raise KeyError(name)

    def variable_counts(self) -> dict[str, int]:
        """Number of variables per prefix (``x``, ``y``, ``z``, ``s``)."""
        return dict(Counter(var.name.split("_", 1)[0] for var in self.variables))

    def row_counts(self) -> dict[str, int]:
        """Number of rows per constraint family."""
        return dict(Counter(row.family for row in self.constraints))

    def undeclared_references(self) -> set[str]:
        """Variable names used by the objective or a row but never declared."""
        declared = {var.name for var in self.variables}
        used = {name for _, name in self.objective}
        for row in self.constraints:
            used.update(name for _, name in row.terms)
        return used - declared


def _scaled(terms: Iterable[tuple[Fraction, str]], rhs: Fraction) -> tuple[Terms, Fraction]:
    kept = tuple((Fraction(c), v) for c, v in terms if c != 0)
    scale = math.lcm(rhs.denominator, *(c.denominator for c, _ in kept))
    return tuple((c * scale, v) for c, v in kept), rhs * scale


def _row(name: str, terms: Iterable[tuple[Fraction, str]], sense: str, rhs: Fraction) -> Constraint:
    scaled_terms, scaled_rhs = _scaled(terms, Fraction(rhs))
    return Constraint(name=name, terms=scaled_terms, sense=sense, rhs=scaled_rhs)


def x(i: int, j: int, k: int) -> str:
    return f"x_{i}_{j}_{k}"


def y(i: int, k: int) -> str:
    return f"y_{i}_{k}"


def z(k: int) -> str:
    return f"z_{k}"


def s(i: int, k: int) -> str:
    return f"s_{i}_{k}"


ONE = Fraction(1)


def build_milp(problem: Problem, travel_set: TravelSet | None = None) -> MilpModel:
    """Build the full model for every robot of the base fleet.

    Arcs that cannot be part of a tour are kept as variables but fixed to 0:
    self loops, arcs into the start depot, arcs out of the end depot, the
    direct start-to-end arc and arcs with no permitted path.  Infinite
    deadlines are replaced by the largest battery, which bounds every arrival
    time of a feasible tour.  The big-M is that time horizon (the larger of
    the latest finite deadline and the largest battery) plus the longest
    finite travel time plus one.
    """
    travel = travel_set if travel_set is not None else build_travel_set(problem)
    fleet = build_base_fleet(problem)
    n = problem.num_tasks
    end = n + 1
    nodes = range(n + 2)
    tasks = range(1, n + 1)
    robots = range(1, len(fleet) + 1)
    rtypes = {k: problem.type_of(fleet.robots[k - 1]) for k in robots}

    def meta(node: int) -> int:
        return 0 if node == end else node

    def dist(k: int, i: int, j: int) -> TravelTime:
        return travel[rtypes[k].id].time(meta(i), meta(j))

    def excluded(k: int, i: int, j: int) -> bool:
        return (
            i == j
            or j == 0
            or i == end
            or (i == 0 and j == end)
            or isinstance(dist(k, i, j), float)
        )

    max_battery = max((rt.battery for rt in problem.robot_types), default=Fraction(0))
    finite_deadlines = [t.deadline for t in problem.tasks if not isinstance(t.deadline, float)]
    horizon = max([max_battery, *finite_deadlines])
    finite_legs = [
        t for matrix in travel.values() for t in matrix.finite_entries()
    ]
    big_m = horizon + max(finite_legs, default=Fraction(0)) + 1

    def deadline(i: int) -> Fraction:
        value = problem.tasks[i - 1].deadline
        return max_battery if isinstance(value, float) else value

    variables: list[Variable] = []
    for k in robots:
        for i in nodes:
            for j in nodes:
                fixed = excluded(k, i, j)
                variables.append(
                    Variable(x(i, j, k), binary=True, upper=Fraction(0) if fixed else ONE)
                )
    variables.extend(Variable(y(i, k), binary=True, upper=ONE) for k in robots for i in tasks)
    variables.extend(Variable(z(k), binary=True, upper=ONE) for k in robots)
    variables.extend(Variable(s(i, k), binary=False) for k in robots for i in nodes)

    rows: list[Constraint] = []
    # one departure from and one arrival at the depot iff deployed
    for k in robots:
        rows.append(
            _row(
                f"c3b_out_{k}",
                [*((ONE, x(0, j, k)) for j in tasks), (-ONE, z(k))],
                EQ,
                Fraction(0),
            )
        )
        rows.append(
            _row(
                f"c3b_in_{k}",
                [*((ONE, x(j, end, k)) for j in tasks), (-ONE, z(k))],
                EQ,
                Fraction(0),
            )
        )
    # flow conservation coupled to service
    for k in robots:
        for task in tasks:
            inflow = [(ONE, x(i, task, k)) for i in nodes if i != task]
            outflow = [(ONE, x(task, j, k)) for j in nodes if j != task]
            served = (-ONE, y(task, k))
            rows.append(_row(f"c3c_in_{task}_{k}", [*inflow, served], EQ, Fraction(0)))
            rows.append(_row(f"c3c_out_{task}_{k}", [*outflow, served], EQ, Fraction(0)))
    # time propagation along used arcs
    for k in robots:
        for i in nodes:
            for j in nodes:
                if i == j:
                    continue
                leg = dist(k, i, j)
                d = Fraction(0) if isinstance(leg, float) else leg
                rows.append(
                    _row(
                        f"c3d_{i}_{j}_{k}",
                        [(ONE, s(i, k)), (-ONE, s(j, k)), (big_m, x(i, j, k))],
                        LE,
                        big_m - d,
                    )
                )
    # each task served at most once
    for task in tasks:
        rows.append(_row(f"c3e_{task}", [(ONE, y(task, k)) for k in robots], LE, ONE))
    # capability gating with constant c
    for k in robots:
        for task in tasks:
            capable = rtypes[k].can_service(problem.tasks[task - 1])
            rows.append(
                _row(f"c3f_{task}_{k}", [(ONE, y(task, k))], LE, Fraction(int(capable)))
            )
    # deadlines
    for k in robots:
        for task in tasks:
            rows.append(
                _row(
                    f"c3g_{task}_{k}",
                    [(ONE, s(task, k)), (-deadline(task), y(task, k))],
                    LE,
                    Fraction(0),
                )
            )
    # battery, both depot legs included
    for k in robots:
        legs = [
            (dist(k, i, j), x(i, j, k))
            for i in nodes
            for j in nodes
            if not excluded(k, i, j)
        ]
        battery = _row(f"c3h_{k}", legs, LE, rtypes[k].battery)  # type: ignore[arg-type]
        if not battery.terms:
            # no usable arc: keep the row so every robot has one
            battery = replace(battery, terms=((Fraction(0), z(k)),))
        rows.append(battery)
    # budget
    rows.append(_row("c3i", [(rtypes[k].deploy_cost, z(k)) for k in robots], LE, problem.budget))

    # rows over an empty fleet have no terms
    rows = [row for row in rows if row.terms]
    model = MilpModel(
        name=problem.name,
        objective=tuple((ONE, y(i, k)) for k in robots for i in tasks),
        constraints=tuple(rows),
        variables=tuple(variables),
        big_m=big_m,
    )
    logger.info(
        "milp_built",
        scenario=problem.name,
        variables=len(model.variables),
        rows=len(model.constraints),
        big_m=str(big_m),
    )
    return model
