"""Problem-side domain models: graph, tasks, robot types, fleets and problems."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

from pydantic import BaseModel, Field, NonNegativeInt, PositiveInt, model_validator

from fleet_design.models.enums import RobotKind
from fleet_design.models.quantities import (
    MODEL_CONFIG,
    ClassSet,
    LabelSet,
    Rational,
    TimeBound,
)

GROUND = "ground"
AIR = "air"


class Edge(BaseModel):
    """An undirected edge of the environment graph."""

    model_config = MODEL_CONFIG

    u: NonNegativeInt = Field(description="First endpoint vertex id.")
    v: NonNegativeInt = Field(description="Second endpoint vertex id.")
    length: Rational = Field(description="Metric length, strictly positive.")
    edge_class: str = Field(
        default=GROUND,
        description="Traversability class; a robot type may only use its allowed classes.",
    )

    @model_validator(mode="after")
    def check_edge(self) -> Edge:
        if self.length <= 0:
            raise ValueError(f"edge ({self.u},{self.v}) must have positive length")
        if self.u == self.v:
            raise ValueError(f"self-loop on vertex {self.u} is not allowed")
        return self


class EnvironmentGraph(BaseModel):
    """Weighted undirected graph on vertices ``0 .. vertex_count-1``."""

    model_config = MODEL_CONFIG

    vertex_count: PositiveInt
    edges: tuple[Edge, ...] = ()

    @model_validator(mode="after")
    def check_endpoints(self) -> EnvironmentGraph:
        for edge in self.edges:
            if edge.u >= self.vertex_count or edge.v >= self.vertex_count:
                raise ValueError(
                    f"edge ({edge.u},{edge.v}) references a vertex outside "
                    f"0..{self.vertex_count - 1}"
                )
        return self

    def edge_classes(self) -> frozenset[str]:
        return frozenset(edge.edge_class for edge in self.edges)


class Task(BaseModel):
    """A vertex that must be visited before its deadline by a capable robot."""

    model_config = MODEL_CONFIG

    id: NonNegativeInt
    vertex: NonNegativeInt
    deadline: TimeBound = Field(description="Latest arrival time; may be infinite.")
    requirements: LabelSet = Field(default_factory=frozenset)

    @model_validator(mode="after")
    def check_deadline(self) -> Task:
        if self.deadline <= 0:
            raise ValueError(f"task {self.id} must have a positive deadline")
        return self


class RobotType(BaseModel):
    """A purchasable robot model.

    The per-edge traversal matrix of a type is not stored: it is derived by
    :mod:`fleet_design.pathing` from ``speed_factor`` (1 = 100 %) and the
    set of edge classes the type may traverse.
    """

    model_config = MODEL_CONFIG

    id: NonNegativeInt
    name: str = ""
    capabilities: LabelSet = Field(default_factory=frozenset)
    deploy_cost: Rational
    battery: Rational
    speed_factor: Rational = Fraction(1)
    allowed_edge_classes: ClassSet = Field(default_factory=lambda: frozenset({GROUND}))
    kind: RobotKind = RobotKind.AGV

    @model_validator(mode="after")
    def check_positive(self) -> RobotType:
        for name in ("deploy_cost", "battery", "speed_factor"):
            if getattr(self, name) <= 0:
                raise ValueError(f"robot type {self.id}: {name} must be positive")
        return self

    def can_service(self, task: Task) -> bool:
        return task.requirements <= self.capabilities


class Robot(BaseModel):
    """One member of the base fleet."""

    model_config = MODEL_CONFIG

    robot_index: NonNegativeInt
    type_ref: NonNegativeInt


class BaseFleet(BaseModel):
    """The multiset of robots any budget-feasible fleet is drawn from."""

    model_config = MODEL_CONFIG

    robots: tuple[Robot, ...] = ()

    @model_validator(mode="after")
    def check_indices(self) -> BaseFleet:
        for position, robot in enumerate(self.robots):
            if robot.robot_index != position:
                raise ValueError(
                    f"robot at position {position} has robot_index {robot.robot_index}"
                )
        return self

    def __len__(self) -> int:
        return len(self.robots)

    def counts(self) -> dict[int, int]:
        """Number of robots per type id."""
        return dict(sorted(Counter(r.type_ref for r in self.robots).items()))


class Problem(BaseModel):
    """A complete budgeted fleet-design instance."""

    model_config = MODEL_CONFIG

    name: str = "scenario"
    graph: EnvironmentGraph
    depot: NonNegativeInt
    tasks: tuple[Task, ...] = ()
    robot_types: tuple[RobotType, ...]
    budget: Rational

    @model_validator(mode="after")
    def check_problem(self) -> Problem:
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        if not self.robot_types:
            raise ValueError("at least one robot type is required")
        if self.depot >= self.graph.vertex_count:
            raise ValueError(f"depot vertex {self.depot} is not in the graph")
        for position, task in enumerate(self.tasks):
            if task.id != position:
                raise ValueError(f"task at position {position} has id {task.id}")
            if task.vertex >= self.graph.vertex_count:
                raise ValueError(f"task {task.id} vertex {task.vertex} is not in the graph")
        for position, rtype in enumerate(self.robot_types):
            if rtype.id != position:
                raise ValueError(f"robot type at position {position} has id {rtype.id}")
        return self

    @property
    def num_tasks(self) -> int:
        return len(self.tasks)

    def type_of(self, robot: Robot) -> RobotType:
        return self.robot_types[robot.type_ref]
