"""Exception hierarchy shared by all fleet-design modules."""

from __future__ import annotations


class FleetDesignError(Exception):
    """Base class for every error raised deliberately by this package."""


class UnreachableVertex(FleetDesignError):
    """A tour leg has infinite travel time for the robot's type."""

    def __init__(self, robot_index: int, from_node: int, to_node: int) -> None:
        self.robot_index = robot_index
        self.from_node = from_node
        self.to_node = to_node
        super().__init__(
            f"Robot {robot_index} cannot travel from meta-graph node {from_node} "
            f"to node {to_node} (no permitted path)."
        )


class InfeasibleSolution(FleetDesignError):
    """A reward was requested for a solution that fails the feasibility check."""

    def __init__(self, violations: list[str]) -> None:
        self.violations = violations
        summary = "; ".join(violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        super().__init__(f"Solution is infeasible: {summary}{more}")


class SizeExceeded(FleetDesignError):
    """An exact enumeration would exceed its configured limits."""

    def __init__(self, limit: str, value: int, maximum: int) -> None:
        self.limit = limit
        self.value = value
        self.maximum = maximum
        super().__init__(f"SizeExceeded: {limit}={value} exceeds the maximum of {maximum}.")


class InsufficientVertices(FleetDesignError):
    """More tasks were requested than there are free vertices to place them on."""

    def __init__(self, requested: int, available: int) -> None:
        self.requested = requested
        self.available = available
        super().__init__(
            f"Cannot place {requested} tasks: only {available} non-depot vertices are available."
        )


class ParseError(FleetDesignError):
    """A scenario, solution, experiment or LP file could not be read.

    Attributes
    ----------
    source:
        File name or description of the input.
    line:
        1-based line number, when known.
    field:
        Dotted path of the offending field or the missing section name.
    """

    def __init__(
        self,
        message: str,
        *,
        source: str = "<input>",
        line: int | None = None,
        field: str | None = None,
    ) -> None:
        self.source = source
        self.line = line
        self.field = field
        where = source
        if line is not None:
            where += f":{line}"
        if field is not None:
            where += f" [{field}]"
        super().__init__(f"{where}: {message}")
