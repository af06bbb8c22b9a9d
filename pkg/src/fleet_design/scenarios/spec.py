"""Declarative scenario description consumed by :func:`generate`."""

from __future__ import annotations

from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, Field, NonNegativeInt, PositiveInt, model_validator

from fleet_design.models.enums import AirPolicy, RobotKind
from fleet_design.models.problem import AIR, GROUND, EnvironmentGraph
from fleet_design.models.quantities import MODEL_CONFIG, ClassSet, LabelSet, Rational, TimeBound

FORMAT_VERSION = 1


class GridSpec(BaseModel):
    """Square-cell grid with randomly placed obstacle cells.

    Vertex ``y * width + x`` is the cell at column *x*, row *y*.  Ground edges
    join 4-neighbour free cells; with ``air_policy="overlay"`` every
    4-neighbour pair, obstacles included, is also joined by an air edge.
    """

    model_config = MODEL_CONFIG

    width: PositiveInt = 15
    height: PositiveInt = 15
    cell_length: Rational = Fraction(4)
    obstacle_density: float = Field(default=0.0, ge=0, lt=1)
    air_policy: AirPolicy = AirPolicy.NONE

    @model_validator(mode="after")
    def check_cell(self) -> GridSpec:
        if self.cell_length <= 0:
            raise ValueError("cell_length must be positive")
        return self

    @property
    def vertex_count(self) -> int:
        return self.width * self.height

    def center(self) -> int:
        return (self.height // 2) * self.width + self.width // 2


class RequirementCategory(BaseModel):
    """One requirement set a task may draw, with its relative weight."""

    model_config = MODEL_CONFIG

    labels: LabelSet = Field(default_factory=frozenset)
    weight: float = Field(default=1.0, ge=0)


class RobotTypeSpec(BaseModel):
    """A row of a robot type table: capabilities, speed, battery, cost, kind."""

    model_config = MODEL_CONFIG

    name: str = ""
    capabilities: LabelSet = Field(default_factory=frozenset)
    speed_percent: Rational = Fraction(100)
    battery: Rational
    cost: Rational
    kind: RobotKind = RobotKind.AGV
    allowed_edge_classes: ClassSet | None = Field(
        default=None,
        description="Defaults to ground edges for AGVs and ground plus air edges for UAVs.",
    )

    def edge_classes(self) -> frozenset[str]:
        if self.allowed_edge_classes is not None:
            return self.allowed_edge_classes
        if self.kind is RobotKind.UAV:
            return frozenset({GROUND, AIR})
        return frozenset({GROUND})


class ScenarioSpec(BaseModel):
    """Everything needed to generate one problem instance deterministically."""

    model_config = MODEL_CONFIG

    format_version: Literal[1] = FORMAT_VERSION
    name: str = "scenario"
    graph: EnvironmentGraph | None = Field(default=None, description="Inline graph.")
    grid: GridSpec | None = Field(default=None, description="Generated grid graph.")
    depot: NonNegativeInt | None = Field(
        default=None, description="Depot vertex; the grid centre when omitted."
    )
    task_count: NonNegativeInt = 20
    requirements: tuple[RequirementCategory, ...] = (RequirementCategory(),)
    deadline: TimeBound = Fraction(150)
    robot_types: tuple[RobotTypeSpec, ...]
    budget: Rational
    seed: NonNegativeInt = 0

    @model_validator(mode="after")
    def check_spec(self) -> ScenarioSpec:
        if (self.graph is None) == (self.grid is None):
            raise ValueError("exactly one of 'graph' and 'grid' must be given")
        if self.graph is not None and self.depot is None:
            raise ValueError("an inline graph needs an explicit depot")
        if not self.requirements:
            raise ValueError("at least one requirement category is required")
        if not any(c.weight > 0 for c in self.requirements):
            raise ValueError("requirement weights must not all be zero")
        if not self.robot_types:
            raise ValueError("at least one robot type is required")
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        return self

    def with_overrides(
        self,
        *,
        task_count: int | None = None,
        budget: Fraction | int | None = None,
        seed: int | None = None,
    ) -> ScenarioSpec:
        """Copy with a different task count, budget or seed (validated)."""
        data = self.model_dump()
        if task_count is not None:
            data["task_count"] = task_count
        if budget is not None:
            data["budget"] = budget
        if seed is not None:
            data["seed"] = seed
        return ScenarioSpec.model_validate(data)
