"""Experiment sweeps: specification, execution and summaries."""

from fleet_design.harness.report import Summary, summarize, write_summary
from fleet_design.harness.runner import (
    RESULT_COLUMNS,
    CellFailure,
    ResultRecord,
    SweepResult,
    format_fleet,
    load_results,
    parse_fleet,
    run,
    run_cell,
)
from fleet_design.harness.spec import ExperimentSpec, bundled_experiment

__all__ = [
    "RESULT_COLUMNS",
    "CellFailure",
    "ExperimentSpec",
    "ResultRecord",
    "Summary",
    "SweepResult",
    "bundled_experiment",
    "format_fleet",
    "load_results",
    "parse_fleet",
    "run",
    "run_cell",
    "summarize",
    "write_summary",
]
