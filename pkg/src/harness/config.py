"""Runtime configuration for the stopa command-line harness."""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

from pydantic import BaseModel, Field


class HarnessSettings(BaseModel):
    """Environment-backed defaults for stopa CLI commands; flags override them."""

    lexicon_path: Path | None = None
    config_path: Path | None = None
    jobs: int = Field(default=1, ge=1)
    log_level: str = "WARNING"

    def resolved_lexicon(self, override: str | None) -> Path | None:
        """Return the lexicon path a command should load, or None for the shipped one."""
        if override:
            return Path(override).expanduser()
        return self.lexicon_path

    def resolved_config(self, override: str | None) -> Path | None:
        if override:
            return Path(override).expanduser()
        return self.config_path


@lru_cache(maxsize=1)
def get_settings() -> HarnessSettings:
    """Load settings from environment variables once per process."""
    lexicon: str | None = os.getenv("STOPA_LEXICON")
    config: str | None = os.getenv("STOPA_CONFIG")
    return HarnessSettings(
        lexicon_path=Path(lexicon) if lexicon else None,
        config_path=Path(config) if config else None,
        jobs=int(os.getenv("STOPA_JOBS", "1")),
        log_level=os.getenv("STOPA_LOG_LEVEL", "WARNING").upper(),
    )
