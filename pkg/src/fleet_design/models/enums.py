"""RemovalMode, DiscountDenominator, Method, RobotKind, AirPolicy and ViolationKind enums."""

from enum import StrEnum


class RemovalMode(StrEnum):
    """Destroy operators available to the fleet LNS."""

    ROBOT_REMOVAL = "robot"
    TASK_REMOVAL = "task"


class DiscountDenominator(StrEnum):
    """Quantity dividing the marginal gain when a repair activates an idle robot."""

    COST = "cost"
    BATTERY = "battery"


class Method(StrEnum):
    """Solution methods compared by the harness."""

    LNS = "lns"
    GREEDY = "greedy"
    RANDOM = "random"
    ORACLE = "oracle"


class RobotKind(StrEnum):
    """Platform label carried by robot types (informational)."""

    AGV = "AGV"
    UAV = "UAV"


class ViolationKind(StrEnum):
    """Constraint families reported by the feasibility check."""

    FLEET_MISMATCH = "FLEET_MISMATCH"
    UNKNOWN_TASK = "UNKNOWN_TASK"
    BUDGET = "BUDGET"
    BATTERY = "BATTERY"
    CAPABILITY = "CAPABILITY"
    DEADLINE = "DEADLINE"
    DUPLICATE_TASK = "DUPLICATE_TASK"
    UNREACHABLE = "UNREACHABLE"


class AirPolicy(StrEnum):
    """How a generated grid adds edges usable only by aerial robots."""

    NONE = "none"
    OVERLAY = "overlay"  # air edges between all 4-neighbour cells, obstacles included
