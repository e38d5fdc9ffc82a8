from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Any

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings

BASE_DIR = Path(__file__).resolve().parent.parent
RUNTIME_DIR = BASE_DIR / 'runtime'


class RunConfig(BaseSettings):
    """Tolerances, grid steps and output locations shared by the library and the CLI."""

    APP_ENV: str = Field(default='development')
    PROB_TOL: float = Field(default=1e-12)
    NORM_TOL: float = Field(default=1e-9)
    CAPACITY_EPS: float = Field(default=1e-12)
    VIOLATION_TOL: float = Field(default=1e-9)
    SOLVER_TOL: float = Field(default=1e-6)
    SOLVER_MAX_ITER: int = Field(default=500)
    GRID_STEP: float = Field(default=0.01)
    CURVE_STEP: float = Field(default=0.1)
    SEED: int = Field(default=7)
    PROPERTY_SAMPLES: int = Field(default=10_000)
    CHANNEL_SAMPLES: int = Field(default=1_000)
    WORKERS: int = Field(default=1)
    REPORTS_DIR: Path = Field(default=BASE_DIR / 'reports')
    AUDIT_DB_PATH: Path = Field(default=RUNTIME_DIR / 'signalbox.sqlite')
    TARGETS_PATH: Path = Field(default=RUNTIME_DIR / 'targets.yaml')

    class Config:
        env_file = '.env'
        env_file_encoding = 'utf-8'
        case_sensitive = False

    @field_validator('PROB_TOL', 'NORM_TOL', 'CAPACITY_EPS', 'VIOLATION_TOL', 'SOLVER_TOL')
    @classmethod
    def _positive_tolerance(cls, value: float) -> float:
        if value <= 0:
            raise ValueError(f'tolerances must be positive, got {value}')
        return value

    @field_validator('GRID_STEP')
    @classmethod
    def _step_in_range(cls, value: float) -> float:
        if not 0 < value <= 0.1:
            raise ValueError(f'grid step must lie in (0, 0.1], got {value}')
        return value

    @field_validator('CURVE_STEP')
    @classmethod
    def _curve_step_in_range(cls, value: float) -> float:
        if not 0 < value <= 2:
            raise ValueError(f'curve step must lie in (0, 2], got {value}')
        return value

    @field_validator('SOLVER_MAX_ITER', 'PROPERTY_SAMPLES', 'CHANNEL_SAMPLES', 'WORKERS')
    @classmethod
    def _positive_count(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f'counts must be at least 1, got {value}')
        return value

    def ensure_runtime_paths(self) -> None:
        self.AUDIT_DB_PATH.parent.mkdir(parents=True, exist_ok=True)
        self.TARGETS_PATH.parent.mkdir(parents=True, exist_ok=True)
        self.REPORTS_DIR.mkdir(parents=True, exist_ok=True)

    def with_overrides(self, **overrides: Any) -> 'RunConfig':
        """Return a validated copy where non-None overrides (CLI flags) win."""
        updates = {key.upper(): value for key, value in overrides.items() if value is not None}
        if not updates:
            return self
        merged = self.model_dump()
        merged.update(updates)
        return RunConfig(**merged)


@lru_cache(maxsize=1)
def get_settings() -> RunConfig:
    settings = RunConfig()
    settings.ensure_runtime_paths()
    return settings


def load_run_config(path: Path | None = None, **overrides: Any) -> RunConfig:
    """Defaults, then environment, then the key=value file at ``path``, then ``overrides``."""
    if path is None:
        base = get_settings()
    else:
        if not Path(path).exists():
            raise FileNotFoundError(f'config file not found: {path}')
        base = RunConfig(_env_file=str(path))
    config = base.with_overrides(**overrides)
    config.ensure_runtime_paths()
    return config

