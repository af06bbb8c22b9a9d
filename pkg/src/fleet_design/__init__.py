"""fleet-design: budgeted heterogeneous robot fleet design."""

from fleet_design.evaluation import (
    FeasibilityReport,
    build_base_fleet,
    evaluate_reward,
    is_feasible,
    tour_schedule,
)
from fleet_design.models import LnsParams, Method, Problem, Solution, Tour
from fleet_design.pathing import build_travel_matrix, build_travel_set
from fleet_design.solvers import SolverOutput, get_solver

__version__ = "0.1.0"

__all__ = [
    "FeasibilityReport",
    "LnsParams",
    "Method",
    "Problem",
    "Solution",
    "SolverOutput",
    "Tour",
    "__version__",
    "build_base_fleet",
    "build_travel_matrix",
    "build_travel_set",
    "evaluate_reward",
    "get_solver",
    "is_feasible",
    "tour_schedule",
]
