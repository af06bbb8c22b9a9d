"""Per-robot-type travel matrices over the depot and task vertices.

For every robot type the environment graph is restricted to the edge classes
the type may traverse, shortest path lengths are computed with Dijkstra from
the depot and every task vertex, and lengths are divided by the type's speed
factor.  The result is the complete meta-graph of the depot plus the tasks:
node ``0`` is the depot and node ``i + 1`` is task ``i``.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import structlog

from fleet_design.models.problem import EnvironmentGraph, Problem, RobotType, Task

logger = structlog.get_logger(__name__)

DEPOT_NODE = 0

TravelTime = Fraction | float  # float only for math.inf


@dataclass(frozen=True)
class TravelMatrix:
    """Shortest travel times between meta-graph nodes for one robot type.

    Attributes
    ----------
    robot_type:
        Id of the robot type the matrix belongs to.
    vertices:
        Environment vertex of each meta-graph node (depot first).
    times:
        ``times[a][b]`` travel time from node *a* to node *b*; ``math.inf``
        when no permitted path exists.
    """

    robot_type: int
    vertices: tuple[int, ...]
    times: tuple[tuple[TravelTime, ...], ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    def time(self, a: int, b: int) -> TravelTime:
        return self.times[a][b]

    def finite_entries(self) -> list[Fraction]:
        return [t for row in self.times for t in row if not isinstance(t, float)]


TravelSet = Mapping[int, TravelMatrix]


def task_node(task_id: int) -> int:
    """Meta-graph node of task *task_id*."""
    return task_id + 1


def permitted_subgraph(graph: EnvironmentGraph, allowed: frozenset[str]) -> nx.Graph:
    """Undirected networkx graph holding only edges of the *allowed* classes.

    Parallel edges collapse to the shortest one.
    """
    g = nx.Graph()
    g.add_nodes_from(range(graph.vertex_count))
    for edge in graph.edges:
        if edge.edge_class not in allowed:
            continue
        current = g.get_edge_data(edge.u, edge.v)
        if current is None or edge.length < current["length"]:
            g.add_edge(edge.u, edge.v, length=edge.length)
    return g


def build_travel_matrix(
    graph: EnvironmentGraph,
    depot: int,
    tasks: Sequence[Task],
    rtype: RobotType,
) -> TravelMatrix:
    """Build the meta-graph travel matrix of *rtype*.

    ``times[a][b]`` is the shortest permitted path length between the
    vertices of nodes *a* and *b* divided by ``rtype.speed_factor``, or
    ``math.inf`` when the vertices are disconnected for this type.
    """
    g = permitted_subgraph(graph, rtype.allowed_edge_classes)
    vertices = (depot, *(task.vertex for task in tasks))

    lengths: dict[int, dict[int, Fraction]] = {}
    for source in dict.fromkeys(vertices):
        lengths[source] = nx.single_source_dijkstra_path_length(g, source, weight="length")

    rows: list[tuple[TravelTime, ...]] = []
    unreachable = 0
    for a in vertices:
        row: list[TravelTime] = []
        from_a = lengths[a]
        for b in vertices:
            if b in from_a:
                row.append(Fraction(from_a[b]) / rtype.speed_factor)
            else:
                row.append(math.inf)
                unreachable += 1
        rows.append(tuple(row))

    logger.debug(
        "travel_matrix_built",
        robot_type=rtype.id,
        nodes=len(vertices),
        unreachable_pairs=unreachable,
    )
    return TravelMatrix(robot_type=rtype.id, vertices=vertices, times=tuple(rows))


def build_travel_set(problem: Problem) -> dict[int, TravelMatrix]:
    """Travel matrices for every robot type of *problem*, keyed by type id."""
    return {
        rtype.id: build_travel_matrix(problem.graph, problem.depot, problem.tasks, rtype)
        for rtype in problem.robot_types
    }
