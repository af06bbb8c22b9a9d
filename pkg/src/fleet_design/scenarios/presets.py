"""Bundled scenario families for the three benchmark experiments.

All three use a 15 x 15 grid of 4-unit cells with the depot in the centre,
so the farthest free cell is 56 time units away at 100 % speed.  A deadline
of 150 is then binding for long tours but never unreachable.

- ``exp1``: two requirement labels, three ground robot types.
- ``exp2``: three labels, five ground types, no deadlines.
- ``exp3``: data collection with ground vehicles and drones; 20 % of the
  cells are obstacles that only drones can fly over.
"""

from __future__ import annotations

from collections.abc import Callable
from fractions import Fraction

from fleet_design.models.enums import AirPolicy, RobotKind
from fleet_design.scenarios.spec import (
    GridSpec,
    RequirementCategory,
    RobotTypeSpec,
    ScenarioSpec,
)

DEFAULT_DEADLINE = Fraction(150)


def _row(
    capabilities: set[int],
    speed: int,
    battery: int,
    cost: int,
    kind: RobotKind = RobotKind.AGV,
) -> RobotTypeSpec:
    return RobotTypeSpec(
        capabilities=frozenset(capabilities),
        speed_percent=Fraction(speed),
        battery=Fraction(battery),
        cost=Fraction(cost),
        kind=kind,
    )


def _categories(*label_sets: set[int]) -> tuple[RequirementCategory, ...]:
    return tuple(RequirementCategory(labels=frozenset(s), weight=1.0) for s in label_sets)


def experiment1(task_count: int = 20, budget: int = 70, seed: int = 0) -> ScenarioSpec:
    return ScenarioSpec(
        name="exp1",
        grid=GridSpec(),
        task_count=task_count,
        requirements=_categories({0}, {1}),
        deadline=DEFAULT_DEADLINE,
        robot_types=(
            _row({0}, 100, 200, 20),
            _row({1}, 100, 200, 20),
            _row({0, 1}, 150, 500, 25),
        ),
        budget=Fraction(budget),
        seed=seed,
    )


def experiment2(task_count: int = 20, budget: int = 100, seed: int = 0) -> ScenarioSpec:
    return ScenarioSpec(
        name="exp2",
        grid=GridSpec(),
        task_count=task_count,
        requirements=_categories({0}, {1}, {2}),
        deadline=float("inf"),
        robot_types=(
            _row({0}, 100, 300, 20),
            _row({1}, 100, 300, 20),
            _row({2}, 100, 300, 20),
            _row({0, 1, 2}, 150, 300, 30),
            _row({0, 1}, 100, 250, 25),
        ),
        budget=Fraction(budget),
        seed=seed,
    )


def experiment3(task_count: int = 20, budget: int = 120, seed: int = 0) -> ScenarioSpec:
    return ScenarioSpec(
        name="exp3",
        grid=GridSpec(obstacle_density=0.2, air_policy=AirPolicy.OVERLAY),
        task_count=task_count,
        requirements=_categories({0}, {1}, {2}, {0, 2}),
        deadline=DEFAULT_DEADLINE,
        robot_types=(
            _row({0}, 100, 300, 20),
            _row({0, 1}, 150, 300, 25),
            _row({0, 2}, 200, 300, 20, RobotKind.UAV),
            _row({2}, 200, 250, 10, RobotKind.UAV),
            _row({0}, 300, 250, 15, RobotKind.UAV),
        ),
        budget=Fraction(budget),
        seed=seed,
    )


_PRESET_MAP: dict[str, Callable[..., ScenarioSpec]] = {
    "exp1": experiment1,
    "exp2": experiment2,
    "exp3": experiment3,
}


def get_preset(name: str) -> Callable[..., ScenarioSpec]:
    """Return the scenario factory registered under *name*.

    Raises
    ------
    ValueError
        If *name* is not a bundled preset.
    """
    factory = _PRESET_MAP.get(name)
    if factory is None:
        raise ValueError(f"Unknown preset: {name!r}. Available presets: {sorted(_PRESET_MAP)}")
    return factory


def preset_names() -> list[str]:
    return sorted(_PRESET_MAP)
