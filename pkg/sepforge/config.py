"""Runtime configuration.

Settings are read from ``SEPFORGE_*`` environment variables (and an optional
``.env`` file); the command line may override them for a single run.
"""

from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

HARD_VERTEX_CAP = 24


class Settings(BaseSettings):
    """Base configuration."""

    model_config = SettingsConfigDict(env_prefix="SEPFORGE_", env_file=".env", extra="ignore")

    max_vertices: int = Field(16, ge=1, le=HARD_VERTEX_CAP)
    max_order: Optional[int] = Field(None, ge=0)
    seed: int = 0

    # Logging
    log_level: str = "WARNING"
    log_file: Optional[str] = None

    # Memoisation of enumerations; 0 disables it
    cache_entries: int = Field(4096, ge=0)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {v!r}")
        return level


class ExtendedSettings(Settings):
    """Configuration with the vertex cap raised to its hard limit."""

    max_vertices: int = Field(HARD_VERTEX_CAP, ge=1, le=HARD_VERTEX_CAP)


config = {
    "default": Settings,
    "extended": ExtendedSettings,
}

_active: Optional[Settings] = None


def get_settings() -> Settings:
    """Return the process-wide settings, building them from the environment on first use."""
    global _active
    if _active is None:
        _active = config["default"]()
    return _active


def set_settings(settings: Settings) -> None:
    global _active
    _active = settings


def reset_settings() -> None:
    """Forget overrides so the next access re-reads the environment."""
    global _active
    _active = None
