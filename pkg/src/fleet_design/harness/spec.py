"""Experiment sweep description and the bundled benchmark sweeps."""

from __future__ import annotations

from collections.abc import Callable
from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, Field, NonNegativeInt, PositiveInt, model_validator

from fleet_design.models.enums import Method
from fleet_design.models.params import LnsParams
from fleet_design.models.quantities import MODEL_CONFIG, Rational
from fleet_design.scenarios.presets import experiment1, experiment2, experiment3
from fleet_design.scenarios.spec import FORMAT_VERSION, ScenarioSpec
from fleet_design.solvers.exact import OracleLimits

DEFAULT_METHODS = (Method.LNS, Method.GREEDY, Method.RANDOM)


class ExperimentSpec(BaseModel):
    """A grid of (method, task count, budget, trial) cells over one scenario family.

    The template's ``task_count``, ``budget`` and ``seed`` are replaced per
    cell; everything else (graph, robot table, requirement weights,
    deadline) is shared.
    """

    model_config = MODEL_CONFIG

    format_version: Literal[1] = FORMAT_VERSION
    experiment: str = Field(description="Experiment id; part of every derived seed.")
    scenario: ScenarioSpec
    budgets: tuple[Rational, ...]
    task_counts: tuple[NonNegativeInt, ...]
    trials: PositiveInt = 20
    methods: tuple[Method, ...] = DEFAULT_METHODS
    params: LnsParams = Field(default_factory=LnsParams)
    method_params: dict[Method, LnsParams] = Field(
        default_factory=dict, description="Per-method overrides of 'params'."
    )
    oracle_limits: OracleLimits = Field(default_factory=OracleLimits)
    persist_solutions: bool = False

    @model_validator(mode="after")
    def check_sweep(self) -> ExperimentSpec:
        if not self.methods:
            raise ValueError("at least one method is required")
        if len(set(self.methods)) != len(self.methods):
            raise ValueError("methods must not repeat")
        if not self.budgets:
            raise ValueError("at least one budget is required")
        if any(b < 0 for b in self.budgets):
            raise ValueError("budgets must be non-negative")
        if not self.task_counts:
            raise ValueError("at least one task count is required")
        return self

    def params_for(self, method: Method) -> LnsParams:
        return self.method_params.get(method, self.params)

    def cell_count(self) -> int:
        return len(self.methods) * len(self.task_counts) * len(self.budgets) * self.trials


def _budgets(*values: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


def experiment1_sweep() -> ExperimentSpec:
    return ExperimentSpec(
        experiment="exp1",
        scenario=experiment1(),
        budgets=_budgets(30, 50, 70, 100),
        task_counts=(20, 60, 100),
    )


def experiment2_sweep() -> ExperimentSpec:
    return ExperimentSpec(
        experiment="exp2",
        scenario=experiment2(),
        budgets=_budgets(*range(40, 181, 20)),
        task_counts=(20, 60, 100),
    )


def experiment3_sweep() -> ExperimentSpec:
    return ExperimentSpec(
        experiment="exp3",
        scenario=experiment3(),
        budgets=_budgets(*range(60, 201, 20)),
        task_counts=(20, 60, 100),
    )


_SWEEP_MAP: dict[str, Callable[[], ExperimentSpec]] = {
    "exp1": experiment1_sweep,
    "exp2": experiment2_sweep,
    "exp3": experiment3_sweep,
}


def bundled_experiment(name: str) -> ExperimentSpec:
    """Return the bundled sweep registered under *name*.

    Raises
    ------
    ValueError
        If *name* is not a bundled experiment.
    """
    factory = _SWEEP_MAP.get(name)
    if factory is None:
        raise ValueError(
            f"Unknown experiment: {name!r}. Available experiments: {sorted(_SWEEP_MAP)}"
        )
    return factory()
