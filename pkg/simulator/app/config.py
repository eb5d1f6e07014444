"""
Configuration management for the DCC beaconing simulator.
Handles environment variables and process-level settings.
"""

from enum import Enum
from pathlib import Path

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load .env from project-specific locations only (avoid picking up unrelated parent .env)
_this_file = Path(__file__).resolve()
_project_root = _this_file.parents[2]
_simulator_dir = _this_file.parents[1]
_app_dir = _this_file.parent
for _env_path in (
    _project_root / ".env",
    _simulator_dir / ".env",
    _app_dir / ".env",
):
    if _env_path.exists():
        load_dotenv(_env_path.as_posix(), override=False)
        break


class LogLevel(str, Enum):
    """Supported log levels."""
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


class LogFormat(str, Enum):
    """Log record rendering."""
    TEXT = "text"
    JSON = "json"


class Settings(BaseSettings):
    """Process settings loaded from environment variables (prefix DCCSIM_)."""

    model_config = SettingsConfigDict(env_prefix="DCCSIM_", case_sensitive=False)

    log_level: LogLevel = Field(LogLevel.INFO)
    log_format: LogFormat = Field(LogFormat.TEXT)

    # Where `run`/`sweep` write when --out is not given
    output_dir: Path = Field(Path("results"))

    # Worker processes for `sweep` when --parallelism is not given
    parallelism: int = Field(1, ge=1)

    plot_format: str = Field("svg")

    def describe(self) -> dict:
        """Settings as plain values, for startup logging."""
        return {
            "log_level": self.log_level.value,
            "log_format": self.log_format.value,
            "output_dir": str(self.output_dir),
            "parallelism": self.parallelism,
            "plot_format": self.plot_format,
        }


# Global settings instance
settings = Settings()
