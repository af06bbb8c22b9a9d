"""Reading and writing scenario, scenario-spec and solution files.

All three are JSON documents validated by pydantic models carrying a
``format_version``.  Unknown fields are rejected.  Every failure surfaces as
:class:`~fleet_design.errors.ParseError` with the file name and either the
line (syntax errors) or the dotted path of the offending field.
"""

from __future__ import annotations

import json
from collections.abc import Iterable
from fractions import Fraction
from pathlib import Path
from typing import Literal, TypeVar

import pandas as pd
import structlog
from pydantic import BaseModel, Field, NonNegativeInt, ValidationError

from fleet_design.errors import InfeasibleSolution, ParseError
from fleet_design.evaluation import (
    FeasibilityReport,
    build_base_fleet,
    fleet_composition,
    fleet_cost,
    is_feasible,
)
from fleet_design.models.enums import Method
from fleet_design.models.problem import Problem
from fleet_design.models.quantities import MODEL_CONFIG, Rational, dump_rational
from fleet_design.models.solution import Solution
from fleet_design.pathing import TravelSet, build_travel_set
from fleet_design.scenarios.spec import FORMAT_VERSION, ScenarioSpec

logger = structlog.get_logger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


class ScenarioFile(BaseModel):
    """On-disk form of a concrete problem instance."""

    model_config = MODEL_CONFIG

    format_version: Literal[1] = FORMAT_VERSION
    kind: Literal["scenario"] = "scenario"
    problem: Problem


class SolutionFile(BaseModel):
    """On-disk form of a solver result, re-checkable against its scenario."""

    model_config = MODEL_CONFIG

    format_version: Literal[1] = FORMAT_VERSION
    kind: Literal["solution"] = "solution"
    scenario: str
    method: Method
    seed: NonNegativeInt | None = None
    reward: NonNegativeInt
    cost: Rational
    fleet: dict[int, int] = Field(
        default_factory=dict, description="Deployed robots per type id."
    )
    solution: Solution


# ---------------------------------------------------------------------------
# Generic JSON model I/O
# ---------------------------------------------------------------------------


def _field_path(loc: tuple[int | str, ...]) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


def parse_model(text: str, model: type[ModelT], *, source: str = "<input>") -> ModelT:
    """Validate JSON *text* as *model*, translating failures into ParseError."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        reason = "file is truncated" if exc.pos >= len(text.rstrip()) else exc.msg
        raise ParseError(f"invalid JSON: {reason}", source=source, line=exc.lineno) from exc
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        path = _field_path(first["loc"])
        if first["type"] == "missing":
            message = f"missing section '{path}'"
        else:
            message = first["msg"]
        more = exc.error_count() - 1
        if more:
            message += f" (+{more} more errors)"
        raise ParseError(message, source=source, field=path) from exc


def load_model(path: Path, model: type[ModelT]) -> ModelT:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", source=str(path)) from exc
    return parse_model(text, model, source=str(path))


def save_model(value: BaseModel, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(value.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# Scenarios and specs
# ---------------------------------------------------------------------------


def save_scenario(problem: Problem, path: Path) -> Path:
    return save_model(ScenarioFile(problem=problem), path)


def load_scenario(path: Path) -> Problem:
    return load_model(path, ScenarioFile).problem


def save_spec(spec: ScenarioSpec, path: Path) -> Path:
    return save_model(spec, path)


def load_spec(path: Path) -> ScenarioSpec:
    return load_model(path, ScenarioSpec)


# ---------------------------------------------------------------------------
# Solutions
# ---------------------------------------------------------------------------


def make_solution_file(
    problem: Problem,
    solution: Solution,
    method: Method,
    *,
    seed: int | None = None,
    travel_set: TravelSet | None = None,
) -> SolutionFile:
    """Package *solution* for writing after checking that it is feasible.

    Raises:
        InfeasibleSolution: If the solution fails :func:`is_feasible`.
    """
    travel = travel_set if travel_set is not None else build_travel_set(problem)
    base = build_base_fleet(problem)
    report = is_feasible(solution, problem, travel, base)
    if not report.feasible:
        raise InfeasibleSolution([str(v) for v in report.violations])
    return SolutionFile(
        scenario=problem.name,
        method=method,
        seed=seed,
        reward=len(set(solution.visited_tasks())),
        cost=fleet_cost(solution, problem, base),
        fleet=fleet_composition(solution.active_robots(), base),
        solution=solution,
    )


def save_solution(record: SolutionFile, path: Path) -> Path:
    return save_model(record, path)


def load_solution(path: Path) -> SolutionFile:
    return load_model(path, SolutionFile)


def check_solution(problem: Problem, record: SolutionFile) -> tuple[FeasibilityReport, int | None]:
    """Re-run the feasibility check and recompute the reward of a stored solution.

    The reward is ``None`` when the solution is infeasible.
    """
    travel = build_travel_set(problem)
    report = is_feasible(record.solution, problem, travel)
    if not report.feasible:
        return report, None
    return report, len(set(record.solution.visited_tasks()))


# ---------------------------------------------------------------------------
# CSV logs
# ---------------------------------------------------------------------------


def _csv_cell(value: object) -> object:
    if isinstance(value, Fraction):
        return dump_rational(value)
    return value


def write_rows(rows: Iterable[dict[str, object]], columns: tuple[str, ...], path: Path) -> Path:
    """Write dict rows as CSV with a fixed column order and ``\\n`` line ends."""
    frame = pd.DataFrame(
        [{k: _csv_cell(v) for k, v in row.items()} for row in rows],
        columns=list(columns),
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    logger.debug("csv_written", path=str(path), rows=len(frame))
    return path
