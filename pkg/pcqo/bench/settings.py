"""Run-level settings and logging setup for the bench harness."""

from __future__ import annotations

import logging
import logging.config
from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


class PcqoSettings(BaseSettings):
    """Environment defaults (``PCQO_*`` or ``.env``); CLI flags take precedence."""

    log_level: str = Field("INFO", description="Logging level of the pcqo loggers.")
    threads: int = Field(1, ge=1, description="Restarts run concurrently.")
    out_dir: str = Field(".", description="Directory that receives traces and summaries.")
    gate_cache_size: int = Field(4096, ge=1, description="Gate matrices kept in the LRU cache.")
    edge_threshold: float = Field(
        0.05,
        gt=0,
        lt=1,
        description="Truncation-edge population above which a run is flagged unsafe.",
    )
    progress: bool = Field(False, description="Show a restart progress bar.")

    model_config = SettingsConfigDict(
        env_prefix="PCQO_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level {value!r}")
        return level

    @property
    def output_path(self) -> Path:
        """Expanded output directory, created on demand."""

        path = Path(self.out_dir).expanduser()
        path.mkdir(parents=True, exist_ok=True)
        return path


def configure_logging(settings: PcqoSettings) -> None:
    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {"default": {"format": LOG_FORMAT}},
            "handlers": {
                "console": {
                    "class": "logging.StreamHandler",
                    "formatter": "default",
                    "level": settings.log_level,
                    "stream": "ext://sys.stderr",
                }
            },
            "loggers": {
                "pcqo": {"handlers": ["console"], "level": settings.log_level, "propagate": False},
            },
        }
    )


__all__ = ["PcqoSettings", "configure_logging"]
