"""
Shared configuration management for the tensor-train toolkit.
Loads configuration from YAML and environment variables.
"""
import os
import re
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

import yaml
from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_CONFIG_PATH = Path(__file__).with_name("config.yaml")

# ${NAME} or ${NAME:-default}
_ENV_REFERENCE = re.compile(r"\$\{(\w+)(?::-([^}]*))?\}")


class RuntimeSettings(BaseSettings):
    """Process-level settings taken from TTALG_* variables or a .env file."""

    model_config = SettingsConfigDict(
        env_prefix="TTALG_", env_file=".env", extra="ignore"
    )

    config_path: Optional[str] = None


def _substitute_env(text: str) -> str:
    def replace(match: "re.Match[str]") -> str:
        name, default = match.group(1), match.group(2)
        return os.environ.get(name, default if default is not None else "")

    return _ENV_REFERENCE.sub(replace, text)


class ConfigLoader:
    """Central configuration loader with environment variable substitution."""

    def __init__(self, config_path: Optional[str] = None):
        if config_path is None:
            config_path = RuntimeSettings().config_path or str(DEFAULT_CONFIG_PATH)
        self.config_path = Path(config_path)
        self._config: Dict[str, Any] = {}
        self.load()

    def load(self):
        """Load configuration from YAML with env var substitution."""
        if not self.config_path.exists():
            raise FileNotFoundError(f"Config file not found: {self.config_path}")

        raw_config = self.config_path.read_text()
        self._config = yaml.safe_load(_substitute_env(raw_config)) or {}

    def get(self, key_path: str, default: Any = None) -> Any:
        """
        Get configuration value using dot notation.
        Example: get('numerics.rank_cutoff')
        """
        value: Any = self._config
        for key in key_path.split('.'):
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return value

    def get_section(self, section: str) -> Dict[str, Any]:
        """Get entire configuration section."""
        return dict(self._config.get(section) or {})

    @property
    def config(self) -> Dict[str, Any]:
        """Get full configuration dictionary."""
        return self._config


# Global configuration instance
config = ConfigLoader()


def _blank_to_none(value: Any) -> Any:
    if isinstance(value, str) and not value.strip():
        return None
    return value


class NumericsConfig(BaseModel):
    """Numerical thresholds and the dense memory cap."""
    memory_cap_bytes: int = Field(default=1 << 30, ge=1)
    rank_cutoff: float = Field(default=1e-12, ge=0.0)
    orthogonality_tolerance: float = Field(default=1e-10, gt=0.0)
    max_elements: int = Field(default=2**63 - 1, ge=1)


class OracleConfig(BaseModel):
    """Brute-force reference settings."""
    tolerance: float = Field(default=1e-12, gt=0.0)
    work_cap: int = Field(default=10_000_000, ge=1)
    report_path: Optional[str] = None

    @field_validator("report_path", mode="before")
    @classmethod
    def blank_report_path(cls, value: Any) -> Any:
        return _blank_to_none(value)


class LoggingConfig(BaseModel):
    """Logging output settings."""
    level: str = "WARNING"
    format: str = "text"
    file: Optional[str] = None

    @field_validator("file", mode="before")
    @classmethod
    def blank_log_file(cls, value: Any) -> Any:
        return _blank_to_none(value)


class BenchConfig(BaseModel):
    """Defaults for the scaling benchmark."""
    orders: List[int] = Field(default_factory=lambda: [8, 16, 32, 64])
    mode_size: int = Field(default=4, ge=1)
    rank: int = Field(default=8, ge=1)
    repeats: int = Field(default=5, ge=1)
    seed: int = Field(default=0, ge=0)


_active_numerics: Optional[NumericsConfig] = None


def get_numerics_config() -> NumericsConfig:
    """Get the active numerics configuration (file values plus overrides)."""
    global _active_numerics
    if _active_numerics is None:
        _active_numerics = NumericsConfig(**config.get_section('numerics'))
    return _active_numerics


def override_numerics(**updates: Any) -> NumericsConfig:
    """Replace numerics fields for the rest of the process."""
    global _active_numerics
    merged = get_numerics_config().model_dump()
    merged.update(updates)
    _active_numerics = NumericsConfig(**merged)
    return _active_numerics


@contextmanager
def numerics_overrides(**updates: Any) -> Iterator[NumericsConfig]:
    """Temporarily override numerics fields."""
    global _active_numerics
    previous = get_numerics_config()
    try:
        yield override_numerics(**updates)
    finally:
        _active_numerics = previous


def get_oracle_config() -> OracleConfig:
    """Get oracle configuration."""
    return OracleConfig(**config.get_section('oracle'))


def get_logging_config() -> LoggingConfig:
    """Get logging configuration."""
    return LoggingConfig(**config.get_section('logging'))


def get_bench_config() -> BenchConfig:
    """Get benchmark configuration."""
    return BenchConfig(**config.get_section('bench'))
