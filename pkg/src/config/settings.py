# Process-level settings for teleport-lab
from typing import Optional
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field, field_validator

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

class LabSettings(BaseSettings):
    """Settings read from TELEPORT_LAB_* environment variables and .env"""

    model_config = SettingsConfigDict(
        env_prefix="TELEPORT_LAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Logging
    log_level: str = Field(default="WARNING", description="Console logging level; WARNING keeps stderr silent on success")
    log_file: Optional[str] = Field(default=None, description="Optional log file path receiving INFO progress")

    # Experiment defaults
    default_trials: int = Field(default=10_000, ge=1, description="Trials used when a config does not set them")
    float_digits: int = Field(default=12, ge=1, le=17, description="Significant digits for every emitted number")

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {LOG_LEVELS}")
        return value

def load_config() -> LabSettings:
    """Load settings from environment variables and .env file"""
    return LabSettings()
