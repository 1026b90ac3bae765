from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

MIN_RELIABLE_GRID_POINTS = 21


class ConfigError(Exception):
    """Raised when configuration cannot be loaded or validated."""


class RuntimeConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    run_name: str | None = Field(default=None)


class ObsConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    log_jsonl: bool = Field(default=True)


class SweepConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    grid_points: int = Field(default=201, ge=2)
    lower: float = Field(default=0.0, ge=0.0, le=1.0)
    upper: float = Field(default=1.0, ge=0.0, le=1.0)
    xtol: float = Field(default=1e-9, gt=0)
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _check_bounds(self) -> "SweepConfig":
        if self.lower >= self.upper:
            raise ValueError(f"sweep.lower ({self.lower}) must be below sweep.upper ({self.upper})")
        if self.grid_points < MIN_RELIABLE_GRID_POINTS:
            logging.getLogger(__name__).warning(
                "sweep.grid_points=%d is coarse; sign changes narrower than %.3g may be missed",
                self.grid_points,
                (self.upper - self.lower) / (self.grid_points - 1),
            )
        return self


class ReproduceConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t: float = Field(default=0.01)
    significant_digits: int = Field(default=12, ge=6, le=17)
    include_reduced: bool = Field(default=True)
    bundle: bool = Field(default=True)


class AppConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    runtime: RuntimeConfig = Field(default_factory=RuntimeConfig)
    obs: ObsConfig = Field(default_factory=ObsConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    reproduce: ReproduceConfig = Field(default_factory=ReproduceConfig)


@dataclass(frozen=True)
class LoadedConfig:
    config: AppConfig
    raw: dict[str, Any]


def default_config() -> LoadedConfig:
    return LoadedConfig(config=AppConfig(), raw={})


def load_config(path: Path) -> LoadedConfig:
    if not path.exists():
        raise ConfigError(f"Config not found: {path}")

    try:
        payload = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"Invalid YAML: {exc}") from exc

    if not isinstance(payload, dict):
        raise ConfigError("Config root must be a mapping")

    try:
        config = AppConfig.model_validate(payload)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc

    return LoadedConfig(config=config, raw=payload)
