"""Configuration management for commutclass."""

import logging
from functools import cache
from pathlib import Path
from typing import Any

import yaml
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from commutclass.errors import InvalidInputError

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """Environment-based settings."""

    model_config = SettingsConfigDict(
        env_prefix="COMMUTCLASS_",
        env_file=".env",
        extra="ignore",
    )

    # Caps the worker threads used for time sweeps (unset: one per CPU)
    threads: int | None = Field(default=None, ge=1)
    debug: bool = False


def load_config(config_path: Path) -> dict[str, Any]:
    """Load a run configuration document.

    The file is JSON; it is read with the YAML loader, so YAML documents work as well.

    Args:
        config_path: Path to the configuration file.

    Returns:
        The top-level mapping (empty for an empty file).

    Raises:
        InvalidInputError: If the file is missing, unparsable or not a mapping.
    """
    if not config_path.exists():
        raise InvalidInputError(f"Config file not found: {config_path}")

    try:
        with open(config_path) as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise InvalidInputError(f"Failed to parse config file {config_path}: {e}") from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise InvalidInputError(f"Config file {config_path} must contain a mapping, got {type(data).__name__}")

    logger.debug(f"Loaded {len(data)} config key(s) from {config_path}")
    return data


def merge_overrides(base: dict[str, Any], overrides: dict[str, Any]) -> dict[str, Any]:
    """Overlay explicitly given flag values on file values, key by key.

    None means "flag not given". Nested mappings (grid, window) merge recursively.
    """
    merged = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict):
            existing = merged.get(key)
            merged[key] = merge_overrides(existing if isinstance(existing, dict) else {}, value)
        else:
            merged[key] = value
    return merged


@cache
def get_settings() -> Settings:
    """Environment settings, read on first use."""
    return Settings()
