"""Tuning parameters of the fleet large neighbourhood search."""

from __future__ import annotations

from pydantic import BaseModel, Field

from fleet_design.models.enums import DiscountDenominator
from fleet_design.models.quantities import MODEL_CONFIG


class LnsParams(BaseModel):
    """All knobs of the LNS main loop, its repair step and the annealing schedule.

    The annealing schedule is geometric:
    ``temp(k) = sa_initial_temp * sa_cooling**k``.
    """

    model_config = MODEL_CONFIG

    iterations: int = Field(
        default=1000, ge=1, description="Number of destroy-and-repair iterations."
    )
    robot_removal_max_pct: float = Field(
        default=25.0,
        ge=0,
        le=100,
        description="Upper limit (percent of active robots) removed by robot removal.",
    )
    task_removal_max_pct: float = Field(
        default=50.0,
        ge=0,
        le=100,
        description="Maximum percent of each tour removed by task removal.",
    )
    removal_mode_bias: float = Field(
        default=1 / 3,
        ge=0,
        le=1,
        description="Probability of choosing robot removal.",
    )
    discount_prob: float = Field(
        default=0.1,
        ge=0,
        le=1,
        description="Probability of discounting the gain of an idle robot.",
    )
    noise_max: float = Field(
        default=0.1, ge=0, description="Upper bound of the multiplicative gain noise."
    )
    sa_initial_temp: float = Field(default=1.0, gt=0, description="Annealing temperature at k=0.")
    sa_cooling: float = Field(
        default=0.995, gt=0, lt=1, description="Geometric cooling factor per iteration."
    )
    seed: int = Field(default=0, ge=0, description="Seed of the run's random generator.")
    discount_denominator: DiscountDenominator = Field(
        default=DiscountDenominator.COST,
        description="Divide the gain of an idle robot by its cost or by its battery.",
    )

    def with_seed(self, seed: int) -> LnsParams:
        return self.model_copy(update={"seed": seed})
