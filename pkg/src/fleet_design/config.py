"""Pydantic settings for the fleet-design tools."""

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Process-wide configuration loaded from environment variables."""

    model_config = {"env_prefix": "FLEET_"}

    log_level: str = "INFO"
    log_format: str = "console"  # "console" or "json"
    max_workers: int = Field(default=4, ge=1)
    record_wall_time: bool = True
    oracle_max_tasks: int = Field(default=6, ge=0)
    oracle_max_base_fleet: int = Field(default=8, ge=0)
    oracle_max_states: int = Field(default=2_000_000, ge=1)
