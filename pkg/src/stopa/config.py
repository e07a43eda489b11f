"""Scan options and lexicon resource configuration."""

from __future__ import annotations

from stopa._compat import tomllib
from importlib.resources import files
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from stopa.errors import StopaError

DATA_DIR: Path = Path(str(files("stopa") / "data"))
DEFAULT_LEXICON_PATH: Path = DATA_DIR / "lexicon.tsv"
DEFAULT_FUNCTION_WORDS_PATH: Path = DATA_DIR / "function_words.txt"
DEFAULT_COLLOCATIONS_PATH: Path = DATA_DIR / "collocations.tsv"
DEFAULT_PREFIX_RULES_PATH: Path = DATA_DIR / "prefix_rules.tsv"
DEFAULT_PARADIGMS_PATH: Path = DATA_DIR / "paradigms.tsv"
GOLDEN_RIFMA_PATH: Path = DATA_DIR / "golden.jsonl"

_OPTION_TABLES: tuple[str, ...] = ("scan", "rhyme")


class ConfigError(StopaError):
    """A configuration file is unreadable or contains invalid values."""


class ScanOptions(BaseModel):
    """Every tunable of the scansion, meter and rhyme stages."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    beam_width: int = Field(default=16, ge=1, description="Hypotheses kept per beam stack")
    alpha: float = Field(default=1.0, ge=0.0, description="Cost of an off-ictus stress on a polysyllabic word")
    gamma: float = Field(default=0.5, ge=0.0, description="Cost of an off-ictus stressed monosyllable")
    beta: float = Field(default=1.0, ge=0.0, description="Cost of an avoidable ictus miss")
    unstress_preference: float = Field(default=0.1, ge=0.0, description="Penalty for stressing a function word")
    oov_fit_meter: bool = Field(default=False, description="Let OOV words take any stress the meter prefers")
    oov_fit_penalty: float = Field(default=0.3, ge=0.0)
    oov_alternative_penalty: float = Field(
        default=0.2, ge=0.0, description="Penalty for OOV rule candidates after the preferred one"
    )
    meter_floor: float = Field(default=0.5, ge=0.0, le=1.0, description="Best mean below this means 'other'")
    min_syllables_confident: int = Field(default=6, ge=0)
    stress_coverage_floor: float = Field(default=0.25, ge=0.0, le=1.0)
    brute_force_cap: int = Field(default=1_000_000, ge=1)
    variant_penalty_cutoff: float | None = Field(
        default=None, ge=0.0, description="Drop word variants whose base penalty exceeds this value"
    )
    max_rhyme_distance: int = Field(default=4, ge=1)
    rhyme_threshold: float = Field(default=0.75, ge=0.0, le=1.0)


class LexiconConfig(BaseModel):
    """Locations of the auxiliary lexical tables and the load policy."""

    model_config = ConfigDict(extra="forbid")

    function_words_path: Path = DEFAULT_FUNCTION_WORDS_PATH
    collocations_path: Path = DEFAULT_COLLOCATIONS_PATH
    prefix_rules_path: Path = DEFAULT_PREFIX_RULES_PATH
    # None pairs the shipped lemma table with the shipped dictionary
    paradigms_path: Path | None = Field(default=None, description="Lemma table expanded into extra word forms")
    strict: bool = False


def load_options(path: str | Path | None = None, **overrides: Any) -> ScanOptions:
    """Load ScanOptions from a TOML file, falling back to the embedded defaults.

    Keys may sit at the top level or inside ``[scan]`` / ``[rhyme]`` tables.
    """
    values: dict[str, Any] = {}
    if path is not None:
        config_path: Path = Path(path)
        try:
            raw: dict[str, Any] = tomllib.loads(config_path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config file {config_path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {config_path}: {exc}") from exc
        for key, value in raw.items():
            if key in _OPTION_TABLES and isinstance(value, dict):
                values.update(value)
            else:
                values[key] = value
    values.update(overrides)
    try:
        return ScanOptions(**values)
    except ValidationError as exc:
        raise ConfigError(f"invalid scan options: {exc}") from exc
