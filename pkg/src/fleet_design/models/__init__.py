"""Core domain models for fleet design."""

from fleet_design.models.enums import (
    AirPolicy,
    DiscountDenominator,
    Method,
    RemovalMode,
    RobotKind,
    ViolationKind,
)
from fleet_design.models.params import LnsParams
from fleet_design.models.problem import (
    AIR,
    GROUND,
    BaseFleet,
    Edge,
    EnvironmentGraph,
    Problem,
    Robot,
    RobotType,
    Task,
)
from fleet_design.models.solution import Solution, Tour

__all__ = [
    "AirPolicy",
    "AIR",
    "GROUND",
    "BaseFleet",
    "DiscountDenominator",
    "Edge",
    "EnvironmentGraph",
    "LnsParams",
    "Method",
    "Problem",
    "RemovalMode",
    "Robot",
    "RobotKind",
    "RobotType",
    "Solution",
    "Task",
    "Tour",
    "ViolationKind",
]
