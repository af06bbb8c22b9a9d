"""Execution of experiment sweeps.

Every cell is an independent job: it regenerates its scenario from a derived
seed, runs one method and checks the result.  Cells run in a process pool
(or inline with a single worker) and the result table is sorted by
``(method, N, B, trial)`` whatever the completion order.  A failing cell is
recorded in ``errors.csv`` and does not stop the sweep.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import pandas as pd
import structlog

from fleet_design.config import Settings
from fleet_design.evaluation import build_base_fleet, evaluate_reward, fleet_composition
from fleet_design.harness.spec import ExperimentSpec
from fleet_design.models.enums import Method
from fleet_design.models.quantities import dump_rational
from fleet_design.pathing import build_travel_set
from fleet_design.scenarios.files import make_solution_file, save_solution, write_rows
from fleet_design.scenarios.generator import generate
from fleet_design.seeding import derive_seed
from fleet_design.solvers import get_solver

logger = structlog.get_logger(__name__)

RESULT_COLUMNS = (
    "experiment",
    "method",
    "N",
    "B",
    "trial",
    "reward",
    "fleet",
    "cost",
    "wall_ms",
    "iters",
)
ERROR_COLUMNS = ("experiment", "method", "N", "B", "trial", "error", "message")


def format_fleet(composition: dict[int, int]) -> str:
    """``{0: 1, 2: 2}`` → ``"0:1+2:2"``; the empty fleet is ``""``."""
    return "+".join(f"{type_id}:{count}" for type_id, count in sorted(composition.items()))


def parse_fleet(text: str) -> dict[int, int]:
    if not text:
        return {}
    pairs = (item.split(":", 1) for item in text.split("+"))
    return {int(type_id): int(count) for type_id, count in pairs}


def cell_seed(experiment: str, method: Method, n: int, budget: Fraction, trial: int) -> int:
    """Seed of one cell.

    Random-fleet cells leave the budget out: a trial draws the same type
    sequence at every budget, so a larger budget extends the fleet bought
    with a smaller one for as long as the same types stay affordable.
    """
    if method is Method.RANDOM:
        return derive_seed(experiment, method.value, n, trial)
    return derive_seed(experiment, method.value, n, dump_rational(budget), trial)


def scenario_seed(experiment: str, n: int, trial: int) -> int:
    """Shared by all methods and budgets so they compete on the same instance."""
    return derive_seed(experiment, "scenario", n, trial)


@dataclass(frozen=True)
class CellJob:
    """One (method, N, B, trial) cell of a sweep."""

    spec: ExperimentSpec
    method: Method
    n: int
    budget: Fraction
    trial: int
    record_wall_time: bool = True
    solutions_dir: Path | None = None

    @property
    def key(self) -> tuple[str, int, Fraction, int]:
        return (self.method.value, self.n, self.budget, self.trial)


@dataclass(frozen=True)
class ResultRecord:
    """Outcome of one successful cell."""

    experiment: str
    method: Method
    n: int
    budget: Fraction
    trial: int
    reward: int
    fleet: dict[int, int]
    cost: Fraction
    wall_ms: int
    iters: int

    def as_row(self) -> dict[str, object]:
        return {
            "experiment": self.experiment,
            "method": self.method.value,
            "N": self.n,
            "B": self.budget,
            "trial": self.trial,
            "reward": self.reward,
            "fleet": format_fleet(self.fleet),
            "cost": self.cost,
            "wall_ms": self.wall_ms,
            "iters": self.iters,
        }


@dataclass(frozen=True)
class CellFailure:
    """A cell that raised; the sweep carries on without it."""

    experiment: str
    method: Method
    n: int
    budget: Fraction
    trial: int
    error: str
    message: str

    def as_row(self) -> dict[str, object]:
        return {
            "experiment": self.experiment,
            "method": self.method.value,
            "N": self.n,
            "B": self.budget,
            "trial": self.trial,
            "error": self.error,
            "message": self.message,
        }


@dataclass
class SweepResult:
    records: list[ResultRecord] = field(default_factory=list)
    failures: list[CellFailure] = field(default_factory=list)

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.as_row() for r in self.records], columns=list(RESULT_COLUMNS))


def run_cell(job: CellJob) -> ResultRecord | CellFailure:
    """Generate the cell's scenario, solve it and verify the solution."""
    spec = job.spec
    try:
        scenario = spec.scenario.with_overrides(
            task_count=job.n,
            budget=job.budget,
            seed=scenario_seed(spec.experiment, job.n, job.trial),
        )
        problem = generate(scenario)
        travel = build_travel_set(problem)
        base = build_base_fleet(problem)
        seed = cell_seed(spec.experiment, job.method, job.n, job.budget, job.trial)
        params = spec.params_for(job.method).with_seed(seed)
        solver = get_solver(job.method, limits=spec.oracle_limits)

        started = time.perf_counter()
        output = solver.solve(problem, params, travel_set=travel)
        elapsed = time.perf_counter() - started

        reward = evaluate_reward(output.solution, problem, travel, base)
        composition = fleet_composition(tuple(r.robot_index for r in output.fleet), base)
        cost = sum((problem.type_of(r).deploy_cost for r in output.fleet), Fraction(0))
        if job.solutions_dir is not None:
            record = make_solution_file(
                problem, output.solution, job.method, seed=seed, travel_set=travel
            )
            name = f"{job.method.value}_N{job.n}_B{dump_rational(job.budget)}_t{job.trial}.json"
            save_solution(record, job.solutions_dir / name.replace("/", "-"))
        return ResultRecord(
            experiment=spec.experiment,
            method=job.method,
            n=job.n,
            budget=job.budget,
            trial=job.trial,
            reward=reward,
            fleet=composition,
            cost=cost,
            wall_ms=round(elapsed * 1000) if job.record_wall_time else 0,
            iters=output.iterations,
        )
    except Exception as exc:
        logger.exception(
            "cell_failed",
            experiment=spec.experiment,
            method=job.method.value,
            n=job.n,
            budget=str(job.budget),
            trial=job.trial,
        )
        return CellFailure(
            experiment=spec.experiment,
            method=job.method,
            n=job.n,
            budget=job.budget,
            trial=job.trial,
            error=type(exc).__name__,
            message=str(exc),
        )


def plan_cells(
    spec: ExperimentSpec, *, record_wall_time: bool = True, solutions_dir: Path | None = None
) -> list[CellJob]:
    return [
        CellJob(spec, method, n, budget, trial, record_wall_time, solutions_dir)
        for method in spec.methods
        for n in spec.task_counts
        for budget in spec.budgets
        for trial in range(spec.trials)
    ]


def run(
    spec: ExperimentSpec,
    out_dir: Path | None = None,
    *,
    settings: Settings | None = None,
    record_wall_time: bool | None = None,
) -> SweepResult:
    """Run every cell of *spec* and write ``results.csv`` (and ``errors.csv``).

    Parameters
    ----------
    spec:
        The sweep.
    out_dir:
        Directory receiving the CSV files (and solution files when
        ``spec.persist_solutions``).  Nothing is written when ``None``.
    settings:
        Worker count and timing switch; loaded from the environment when
        omitted.
    record_wall_time:
        Overrides ``settings.record_wall_time``.
    """
    cfg = settings if settings is not None else Settings()
    timing = cfg.record_wall_time if record_wall_time is None else record_wall_time
    solutions_dir = None
    if out_dir is not None and spec.persist_solutions:
        solutions_dir = out_dir / "solutions"
    jobs = plan_cells(spec, record_wall_time=timing, solutions_dir=solutions_dir)
    logger.info(
        "sweep_started",
        experiment=spec.experiment,
        cells=len(jobs),
        workers=cfg.max_workers,
    )

    if cfg.max_workers == 1 or len(jobs) <= 1:
        outcomes = [run_cell(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.max_workers) as pool:
            outcomes = list(pool.map(run_cell, jobs))

    ordered = sorted(zip(jobs, outcomes, strict=True), key=lambda pair: pair[0].key)
    result = SweepResult()
    for _, outcome in ordered:
        if isinstance(outcome, ResultRecord):
            result.records.append(outcome)
        else:
            result.failures.append(outcome)

    if out_dir is not None:
        write_rows((r.as_row() for r in result.records), RESULT_COLUMNS, out_dir / "results.csv")
        if result.failures:
            write_rows((f.as_row() for f in result.failures), ERROR_COLUMNS, out_dir / "errors.csv")
    logger.info(
        "sweep_finished",
        experiment=spec.experiment,
        records=len(result.records),
        failures=len(result.failures),
    )
    return result


def load_results(path: Path) -> pd.DataFrame:
    """Read a ``results.csv`` written by :func:`run`."""
    return pd.read_csv(path, dtype={"fleet": str, "B": str, "cost": str}, keep_default_na=False)
