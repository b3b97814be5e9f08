"""
Runtime settings for guards, thresholds and defaults
"""
import logging
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    """Library tunables, overridable through POLYLIFT_* variables or a local .env file"""

    model_config = SettingsConfigDict(env_prefix="POLYLIFT_", env_file=".env", extra="ignore")

    # Kronecker/assembly guard: rows * cols of any produced matrix
    max_index_space: int = Field(default=2**26, gt=0)

    # Integration
    overflow_threshold: float = Field(default=1e12, gt=0)
    default_step: float = Field(default=1e-3, gt=0)

    # Below this magnitude ||F1|| or mu(F1) is treated as zero
    singular_threshold: float = Field(default=1e-12, gt=0)

    # Envelope audit
    soundness_fraction: float = Field(default=0.9, gt=0, le=1)
    soundness_atol: float = Field(default=1e-10, ge=0)
    envelope_samples: int = Field(default=200, ge=2)

    log_level: str = "INFO"


# Singleton instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create the settings singleton"""
    global _settings
    if _settings is None:
        _settings = Settings()
        logger.debug("Settings loaded: %s", _settings.model_dump())
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next call re-reads the environment"""
    global _settings
    _settings = None
