"""MILP model of the fleet design problem and its LP-file exchange format."""

from __future__ import annotations

from fleet_design.milp.lp_format import load_lp, read_lp, save_lp, write_lp
from fleet_design.milp.model import Constraint, MilpModel, Variable, build_milp
from fleet_design.models.problem import Problem
from fleet_design.pathing import TravelSet

__all__ = [
    "Constraint",
    "MilpModel",
    "Variable",
    "build_milp",
    "export_milp",
    "load_lp",
    "read_lp",
    "save_lp",
    "write_lp",
]


def export_milp(problem: Problem, travel_set: TravelSet | None = None) -> tuple[MilpModel, str]:
    """Build the model of *problem* and render it as LP text."""
    model = build_milp(problem, travel_set)
    return model, write_lp(model)
