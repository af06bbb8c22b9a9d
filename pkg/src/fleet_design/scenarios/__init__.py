"""Scenario schema, seeded generation, bundled presets and file I/O."""

from fleet_design.scenarios.files import (
    ScenarioFile,
    SolutionFile,
    check_solution,
    load_scenario,
    load_solution,
    load_spec,
    make_solution_file,
    save_scenario,
    save_solution,
    save_spec,
    write_rows,
)
from fleet_design.scenarios.generator import generate, knapsack_reduction
from fleet_design.scenarios.presets import get_preset, preset_names
from fleet_design.scenarios.spec import (
    GridSpec,
    RequirementCategory,
    RobotTypeSpec,
    ScenarioSpec,
)

__all__ = [
    "GridSpec",
    "RequirementCategory",
    "RobotTypeSpec",
    "ScenarioFile",
    "ScenarioSpec",
    "SolutionFile",
    "check_solution",
    "generate",
    "get_preset",
    "knapsack_reduction",
    "load_scenario",
    "load_solution",
    "load_spec",
    "make_solution_file",
    "preset_names",
    "save_scenario",
    "save_solution",
    "save_spec",
    "write_rows",
]
