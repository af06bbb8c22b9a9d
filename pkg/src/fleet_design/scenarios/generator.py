"""Seeded problem generation from a :class:`ScenarioSpec`."""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

import networkx as nx
import numpy as np
import structlog

from fleet_design.errors import InsufficientVertices
from fleet_design.models.enums import AirPolicy
from fleet_design.models.problem import (
    AIR,
    GROUND,
    Edge,
    EnvironmentGraph,
    Problem,
    RobotType,
    Task,
)
from fleet_design.pathing import permitted_subgraph
from fleet_design.scenarios.spec import GridSpec, RobotTypeSpec, ScenarioSpec
from fleet_design.seeding import make_rng

logger = structlog.get_logger(__name__)


def build_grid(
    grid: GridSpec, depot: int, rng: np.random.Generator
) -> tuple[EnvironmentGraph, set[int]]:
    """Grid graph plus the set of obstacle cells.

    Every cell except the depot becomes an obstacle with probability
    ``obstacle_density``.
    """
    count = grid.vertex_count
    draws = rng.random(count)
    obstacles = {v for v in range(count) if v != depot and draws[v] < grid.obstacle_density}

    edges: list[Edge] = []
    for y in range(grid.height):
        for x in range(grid.width):
            v = y * grid.width + x
            neighbours = []
            if x + 1 < grid.width:
                neighbours.append(v + 1)
            if y + 1 < grid.height:
                neighbours.append(v + grid.width)
            for w in neighbours:
                if v not in obstacles and w not in obstacles:
                    edges.append(Edge(u=v, v=w, length=grid.cell_length, edge_class=GROUND))
                if grid.air_policy is AirPolicy.OVERLAY:
                    edges.append(Edge(u=v, v=w, length=grid.cell_length, edge_class=AIR))
    return EnvironmentGraph(vertex_count=count, edges=tuple(edges)), obstacles


def reachable_vertices(
    graph: EnvironmentGraph, depot: int, classes: frozenset[str]
) -> set[int]:
    """Vertices connected to *depot* over edges of *classes*, depot included."""
    g = permitted_subgraph(graph, classes)
    return set(nx.node_connected_component(g, depot))


def robot_types_from_table(table: Sequence[RobotTypeSpec]) -> tuple[RobotType, ...]:
    """Turn robot-table rows into :class:`RobotType` models with dense ids."""
    return tuple(
        RobotType(
            id=index,
            name=row.name or f"type{index + 1}",
            capabilities=row.capabilities,
            deploy_cost=row.cost,
            battery=row.battery,
            speed_factor=row.speed_percent / 100,
            allowed_edge_classes=row.edge_classes(),
            kind=row.kind,
        )
        for index, row in enumerate(table)
    )


def generate(spec: ScenarioSpec) -> Problem:
    """Build the problem described by *spec*; equal specs give equal problems.

    Task vertices are drawn uniformly without replacement from the non-depot
    vertices connected to the depot.  On a generated grid only ground edges
    count, so obstacle cells never hold tasks and ground robots reach every
    task.  On an inline graph every edge class some robot type may use
    counts.  Each task draws one requirement category by weight.

    Raises:
        InsufficientVertices: If fewer candidate vertices than tasks exist.
    """
    rng = make_rng(spec.seed)
    robot_types = robot_types_from_table(spec.robot_types)
    classes = frozenset({GROUND})
    if spec.grid is not None:
        depot = spec.depot if spec.depot is not None else spec.grid.center()
        if depot >= spec.grid.vertex_count:
            raise ValueError(
                f"depot vertex {depot} is outside the {spec.grid.vertex_count}-cell grid"
            )
        graph, _ = build_grid(spec.grid, depot, rng)
    else:
        assert spec.graph is not None and spec.depot is not None
        graph, depot = spec.graph, spec.depot
        if depot >= graph.vertex_count:
            raise ValueError(f"depot vertex {depot} is not in the graph")
        classes = frozenset(c for rt in robot_types for c in rt.allowed_edge_classes)

    candidates = sorted(reachable_vertices(graph, depot, classes) - {depot})
    if spec.task_count > len(candidates):
        raise InsufficientVertices(spec.task_count, len(candidates))

    vertices = rng.choice(np.array(candidates, dtype=np.int64), size=spec.task_count, replace=False)
    weights = np.array([c.weight for c in spec.requirements], dtype=float)
    categories = rng.choice(len(spec.requirements), size=spec.task_count, p=weights / weights.sum())

    tasks = tuple(
        Task(
            id=i,
            vertex=int(vertices[i]),
            deadline=spec.deadline,
            requirements=spec.requirements[int(categories[i])].labels,
        )
        for i in range(spec.task_count)
    )
    problem = Problem(
        name=spec.name,
        graph=graph,
        depot=depot,
        tasks=tasks,
        robot_types=robot_types,
        budget=spec.budget,
    )
    logger.debug(
        "scenario_generated",
        scenario=spec.name,
        tasks=spec.task_count,
        vertices=graph.vertex_count,
        seed=spec.seed,
    )
    return problem


def knapsack_reduction(
    weights: Sequence[int], profits: Sequence[int], capacity: int, *, name: str = "knapsack"
) -> Problem:
    """Fleet design instance whose optimum equals the 0/1 knapsack optimum.

    Item *i* becomes a leaf vertex ``i + 1`` one unit from the depot holding
    ``profits[i]`` co-located tasks that require the private label *i*, and a
    robot type with capability ``{i}``, cost ``weights[i]`` and battery 2.
    One robot of type *i* serves all of item *i*'s tasks and nothing else,
    and the budget is the knapsack capacity.
    """
    if len(weights) != len(profits):
        raise ValueError("weights and profits must have the same length")
    if not weights:
        raise ValueError("at least one item is required")
    items = len(weights)
    graph = EnvironmentGraph(
        vertex_count=items + 1,
        edges=tuple(Edge(u=0, v=i + 1, length=Fraction(1)) for i in range(items)),
    )
    tasks: list[Task] = []
    for item, copies in enumerate(profits):
        for _ in range(copies):
            tasks.append(
                Task(
                    id=len(tasks),
                    vertex=item + 1,
                    deadline=float("inf"),
                    requirements=frozenset({item}),
                )
            )
    robot_types = tuple(
        RobotType(
            id=item,
            name=f"item{item}",
            capabilities=frozenset({item}),
            deploy_cost=Fraction(weight),
            battery=Fraction(2),
        )
        for item, weight in enumerate(weights)
    )
    return Problem(
        name=name,
        graph=graph,
        depot=0,
        tasks=tuple(tasks),
        robot_types=robot_types,
        budget=Fraction(capacity),
    )
