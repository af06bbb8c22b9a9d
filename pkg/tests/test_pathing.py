"""Tests for per-type travel matrices."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from fleet_design.models import Edge, EnvironmentGraph, RobotType
from fleet_design.models.problem import AIR, GROUND
from fleet_design.pathing import (
    DEPOT_NODE,
    build_travel_matrix,
    build_travel_set,
    permitted_subgraph,
    task_node,
)
from fleet_design.scenarios import generate, get_preset
from tests.conftest import make_problem


class TestTravelMatrix:
    def setup_method(self) -> None:
        self.problem = make_problem((1, 3))
        self.matrix = build_travel_set(self.problem)[0]

    def test_node_layout(self) -> None:
        assert self.matrix.vertices == (0, 1, 3)
        assert self.matrix.size == 3
        assert task_node(0) == 1
        assert DEPOT_NODE == 0

    def test_shortest_lengths(self) -> None:
        assert self.matrix.time(0, 1) == 1
        assert self.matrix.time(0, 2) == 3
        assert self.matrix.time(1, 2) == 2

    def test_symmetric_with_zero_diagonal(self) -> None:
        for a in range(3):
            assert self.matrix.time(a, a) == 0
            for b in range(3):
                assert self.matrix.time(a, b) == self.matrix.time(b, a)

    def test_speed_factor_divides_lengths(self) -> None:
        fast = RobotType(id=0, deploy_cost=1, battery=1, speed_factor=Fraction(3, 2))
        matrix = build_travel_matrix(self.problem.graph, 0, self.problem.tasks, fast)
        assert matrix.time(0, 2) == 2
        assert matrix.time(0, 1) == Fraction(2, 3)

    def test_co_located_tasks_have_zero_legs(self) -> None:
        matrix = build_travel_set(make_problem((2, 2)))[0]
        assert matrix.time(1, 2) == 0


class TestEdgeClasses:
    def setup_method(self) -> None:
        # 0 -ground- 1 -air- 2, plus a long ground detour 0 - 3 - 2
        self.graph = EnvironmentGraph(
            vertex_count=4,
            edges=(
                Edge(u=0, v=1, length=1),
                Edge(u=1, v=2, length=1, edge_class=AIR),
                Edge(u=0, v=3, length=5),
                Edge(u=3, v=2, length=5),
            ),
        )
        self.agv = RobotType(id=0, deploy_cost=1, battery=100)
        self.uav = RobotType(
            id=1, deploy_cost=1, battery=100, allowed_edge_classes=frozenset({GROUND, AIR})
        )

    def test_ground_type_takes_detour(self) -> None:
        problem = make_problem((2,), graph=self.graph, robot_types=(self.agv, self.uav))
        travel = build_travel_set(problem)
        assert travel[0].time(0, 1) == 10
        assert travel[1].time(0, 1) == 2

    def test_unreachable_is_infinite(self) -> None:
        graph = EnvironmentGraph(
            vertex_count=3,
            edges=(Edge(u=0, v=1, length=1), Edge(u=1, v=2, length=1, edge_class=AIR)),
        )
        problem = make_problem((1, 2), graph=graph, robot_types=(self.agv,))
        matrix = build_travel_set(problem)[0]
        assert matrix.time(0, 2) == math.inf
        assert matrix.time(2, 1) == math.inf
        assert matrix.finite_entries().count(Fraction(0)) == 3

    def test_parallel_edges_keep_shortest(self) -> None:
        graph = EnvironmentGraph(
            vertex_count=2, edges=(Edge(u=0, v=1, length=4), Edge(u=1, v=0, length=3))
        )
        g = permitted_subgraph(graph, frozenset({GROUND}))
        assert g[0][1]["length"] == 3


class TestGeneratedGrid:
    @pytest.mark.parametrize("preset", ["exp1", "exp3"])
    def test_triangle_inequality(self, preset: str) -> None:
        problem = generate(get_preset(preset)(task_count=8, seed=5))
        for matrix in build_travel_set(problem).values():
            n = matrix.size
            for a in range(n):
                for b in range(n):
                    for c in range(n):
                        assert matrix.time(a, c) <= matrix.time(a, b) + matrix.time(b, c)

    def test_uav_never_slower_than_its_ground_distance(self) -> None:
        problem = generate(get_preset("exp3")(task_count=8, seed=2))
        travel = build_travel_set(problem)
        ground = travel[0]  # 100 % AGV
        drone = travel[4]  # 300 % UAV
        for a in range(ground.size):
            for b in range(ground.size):
                assert drone.time(a, b) * 3 <= ground.time(a, b)
