"""Solution-side domain models: tours and tour sets."""

from __future__ import annotations

from pydantic import BaseModel, Field, NonNegativeInt, model_validator

from fleet_design.models.problem import BaseFleet
from fleet_design.models.quantities import MODEL_CONFIG


class Tour(BaseModel):
    """Depot-to-depot visiting sequence of one base-fleet robot.

    An empty tour means the robot is not deployed.
    """

    model_config = MODEL_CONFIG

    robot_index: NonNegativeInt
    visits: tuple[NonNegativeInt, ...] = ()

    @model_validator(mode="after")
    def check_no_repeats(self) -> Tour:
        if len(set(self.visits)) != len(self.visits):
            raise ValueError(f"tour of robot {self.robot_index} repeats a task")
        return self

    @property
    def active(self) -> bool:
        return bool(self.visits)


class Solution(BaseModel):
    """One tour per base-fleet robot."""

    model_config = MODEL_CONFIG

    tours: tuple[Tour, ...] = Field(default=())

    @classmethod
    def empty(cls, base_fleet: BaseFleet) -> Solution:
        return cls(tours=tuple(Tour(robot_index=r.robot_index) for r in base_fleet.robots))

    @classmethod
    def from_visits(cls, visits: list[list[int]] | list[tuple[int, ...]]) -> Solution:
        return cls(
            tours=tuple(Tour(robot_index=i, visits=tuple(v)) for i, v in enumerate(visits))
        )

    @property
    def active_flags(self) -> tuple[bool, ...]:
        """True at index i iff robot i has a nonempty tour."""
        return tuple(t.active for t in self.tours)

    def active_robots(self) -> tuple[int, ...]:
        return tuple(t.robot_index for t in self.tours if t.active)

    def visited_tasks(self) -> list[int]:
        """All visits across all tours, in tour order (duplicates preserved)."""
        return [task for tour in self.tours for task in tour.visits]

    def visit_count(self) -> int:
        return sum(len(t.visits) for t in self.tours)
