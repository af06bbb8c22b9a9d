"""Shared test fixtures and instance builders."""

from __future__ import annotations

import math
from collections.abc import Iterator, Sequence
from fractions import Fraction

import numpy as np
import pytest
import structlog

from fleet_design.models.problem import Edge, EnvironmentGraph, Problem, RobotType, Task
from fleet_design.scenarios.spec import GridSpec, RequirementCategory, RobotTypeSpec, ScenarioSpec


def line_graph(vertex_count: int, length: int = 1) -> EnvironmentGraph:
    """Path 0 - 1 - ... - (vertex_count-1) with equal edge lengths."""
    return EnvironmentGraph(
        vertex_count=vertex_count,
        edges=tuple(Edge(u=i, v=i + 1, length=length) for i in range(vertex_count - 1)),
    )


def make_problem(
    task_vertices: Sequence[int] = (1, 2, 3, 4),
    *,
    graph: EnvironmentGraph | None = None,
    deadlines: Sequence[object] | None = None,
    requirements: Sequence[set[int]] | None = None,
    robot_types: Sequence[RobotType] | None = None,
    budget: int | Fraction = 10,
    name: str = "test",
) -> Problem:
    """Depot at vertex 0 of a unit line graph (unless *graph* is given)."""
    g = graph if graph is not None else line_graph(max(task_vertices, default=0) + 1)
    tasks = tuple(
        Task(
            id=i,
            vertex=v,
            deadline=deadlines[i] if deadlines is not None else math.inf,
            requirements=frozenset(requirements[i]) if requirements is not None else frozenset(),
        )
        for i, v in enumerate(task_vertices)
    )
    types = (
        tuple(robot_types)
        if robot_types is not None
        else (RobotType(id=0, deploy_cost=10, battery=100),)
    )
    return Problem(name=name, graph=g, depot=0, tasks=tasks, robot_types=types, budget=budget)


def tiny_spec(seed: int = 0, task_count: int = 4, budget: int = 30) -> ScenarioSpec:
    """4 x 4 grid, two labels, two ground types; small enough for the oracle."""
    return ScenarioSpec(
        name="tiny",
        grid=GridSpec(width=4, height=4, cell_length=1),
        task_count=task_count,
        requirements=(
            RequirementCategory(labels=frozenset({0})),
            RequirementCategory(labels=frozenset({1})),
        ),
        deadline=8,
        robot_types=(
            RobotTypeSpec(capabilities=frozenset({0}), battery=12, cost=10),
            RobotTypeSpec(capabilities=frozenset({0, 1}), speed_percent=150, battery=10, cost=15),
        ),
        budget=budget,
        seed=seed,
    )


def knapsack_optimum(weights: Sequence[int], profits: Sequence[int], capacity: int) -> int:
    """Classic 0/1 knapsack DP over capacities."""
    best = [0] * (capacity + 1)
    for weight, profit in zip(weights, profits, strict=True):
        for c in range(capacity, weight - 1, -1):
            best[c] = max(best[c], best[c - weight] + profit)
    return best[capacity]


def random_knapsack(rng: np.random.Generator) -> tuple[list[int], list[int], int]:
    items = int(rng.integers(2, 7))
    weights = [int(w) for w in rng.integers(4, 10, size=items)]
    profits = [int(p) for p in rng.integers(1, 3, size=items)]
    capacity = int(rng.integers(8, 17))
    return weights, profits, capacity


@pytest.fixture
def line_problem() -> Problem:
    """Four tasks on a unit line, one cheap long-range type, no deadlines."""
    return make_problem()


@pytest.fixture(autouse=True)
def _reset_structlog() -> Iterator[None]:
    """The CLI binds structlog to the stderr of the running test; undo that."""
    yield
    structlog.reset_defaults()
