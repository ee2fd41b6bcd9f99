"""Pydantic settings for supermech.

This module provides:
- Environment variable support (SUPERMECH__SEED, SUPERMECH__VERIFY__JOBS, etc.)
- Validation with clear error messages
- An optional supermech.toml found by walking up from the working directory
"""

from __future__ import annotations

import tomllib
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from .config_store import CONFIG_FILE, get_config_path, read_raw_toml
from .errors import ConfigError
from .logging import get_logger

logger = get_logger(__name__)


class VerifySettings(BaseModel):
    """Sizes and tolerances of the verification suites."""

    algebra_cases: int = Field(default=200, ge=1)
    calculus_cases: int = Field(default=100, ge=1)
    theorem_forms: int = Field(default=20, ge=1)
    sample_points: int = Field(default=10, ge=1)
    tolerance: float = Field(default=1e-9, gt=0)
    jobs: int = Field(default=1, ge=1)


class ReportSettings(BaseModel):
    format: Literal["text", "kv"] = "text"
    timing: bool = False


class SupermechSettings(BaseSettings):
    """Settings loaded from supermech.toml and environment variables.

    Environment variables use SUPERMECH__ prefix with __ as nested delimiter:
    - SUPERMECH__SEED -> seed
    - SUPERMECH__VERIFY__JOBS -> verify.jobs
    - SUPERMECH__REPORT__FORMAT -> report.format
    """

    model_config = SettingsConfigDict(
        env_prefix="SUPERMECH__",
        env_nested_delimiter="__",
        extra="forbid",
    )

    seed: int = Field(default=0, ge=0)
    verify: VerifySettings = VerifySettings()
    report: ReportSettings = ReportSettings()


def find_config_root(start_path: Path | None = None) -> Path | None:
    """Walk up from start_path to the first directory holding supermech.toml."""
    if start_path is None:
        start_path = Path.cwd()

    current = start_path.resolve()
    while True:
        if (current / CONFIG_FILE).exists():
            return current
        if current == current.parent:
            return None
        current = current.parent


def load_settings(root: Path | None = None) -> SupermechSettings:
    """Load settings; defaults apply when no config file exists.

    Raises:
        ConfigError: If the file is not valid TOML or a value fails validation.
    """
    if root is None:
        root = find_config_root()

    data: dict[str, Any] = {}
    config_path = get_config_path(root) if root is not None else None
    if config_path is not None and config_path.exists():
        try:
            data = read_raw_toml(config_path)
        except tomllib.TOMLDecodeError as e:
            logger.error("settings.load_failed", path=str(config_path), error=str(e))
            raise ConfigError(f"{config_path}: {e}") from e

    try:
        # Init kwargs win over env vars in pydantic-settings; keep env on top.
        settings = SupermechSettings(**data)
        env_only = SupermechSettings()
        overrides = env_only.model_dump(exclude_defaults=True)
        if overrides:
            merged = settings.model_dump()
            for key, value in overrides.items():
                if isinstance(value, dict):
                    merged[key] = {**merged.get(key, {}), **value}
                else:
                    merged[key] = value
            settings = SupermechSettings.model_validate(merged)
    except ValidationError as e:
        where = str(config_path) if config_path is not None else "environment"
        logger.error("settings.validation_failed", path=where, error=str(e))
        raise ConfigError(f"{where}: {e}") from e

    logger.debug("settings.loaded", path=str(config_path) if config_path else None)
    return settings
