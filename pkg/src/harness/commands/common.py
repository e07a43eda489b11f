"""Shared helpers for harness commands."""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, NoReturn

import typer

from harness.config import HarnessSettings, get_settings
from harness.output import EXIT_DATA, EXIT_USAGE, CommandResult, OutputEnvelope
from stopa.config import ConfigError, LexiconConfig, ScanOptions, load_options
from stopa.corpus import ScanContext
from stopa.errors import StopaError
from stopa.lexicon import Lexicon

LexiconOption = Annotated[
    str | None, typer.Option("--lexicon", help="Accent dictionary TSV. Defaults to STOPA_LEXICON or the shipped one.")
]
ConfigOption = Annotated[
    str | None, typer.Option("--config", help="TOML file with scan and rhyme options. Defaults to STOPA_CONFIG.")
]
JobsOption = Annotated[int | None, typer.Option("--jobs", help="Worker processes. Defaults to STOPA_JOBS or 1.")]
StrictOption = Annotated[bool, typer.Option("--strict", help="Fail on the first malformed record instead of skipping.")]


@dataclass(frozen=True, slots=True)
class Runtime:
    """Lexicon, options and worker settings resolved from flags and the environment."""

    lexicon: Lexicon
    options: ScanOptions
    context: ScanContext
    jobs: int
    strict: bool


def elapsed_ms(start: float) -> int:
    """Convert a perf counter start time into a non-negative millisecond duration."""
    return max(0, int((time.perf_counter() - start) * 1000))


def format_error(
    what_went_wrong: str,
    what_to_do: str,
    alternatives: list[str] | tuple[str, ...],
    *,
    help_text: str | None = None,
) -> str:
    """Build a standard structured error message."""
    lines: list[str] = [
        f"What went wrong: {what_went_wrong}",
        f"What to do instead: {what_to_do}",
        f"Available alternatives: {', '.join(alternatives) if alternatives else '(none)'}",
    ]
    if help_text:
        lines.extend(["", help_text.rstrip()])
    return "\n".join(lines)


def error_result(
    what_went_wrong: str,
    what_to_do: str,
    alternatives: list[str] | tuple[str, ...],
    start: float,
    *,
    exit_code: int = EXIT_USAGE,
    help_text: str | None = None,
) -> CommandResult:
    """Build a standard error result with duration metadata."""
    return CommandResult.from_text(
        "",
        stderr=format_error(what_went_wrong, what_to_do, alternatives, help_text=help_text),
        exit_code=exit_code,
        duration_ms=elapsed_ms(start),
    )


def data_error(what_went_wrong: str, what_to_do: str, alternatives: list[str], start: float) -> CommandResult:
    return error_result(what_went_wrong, what_to_do, alternatives, start, exit_code=EXIT_DATA)


def _is_bare_default(v: object) -> bool:
    """True only for None or an empty list/tuple, the values Typer uses for unprovided args."""
    if v is None:
        return True
    if isinstance(v, (list, tuple)) and len(v) == 0:
        return True
    return False


def show_help_if_bare(ctx: typer.Context, **kwargs: object) -> None:
    """If every kwarg is an unprovided default, print help and exit 0.

    Pass only parameters that indicate intent, not options that always carry
    a default value.
    """
    if all(_is_bare_default(v) for v in kwargs.values()):
        typer.echo(ctx.get_help())
        raise typer.Exit(0)


def abort_with_help(
    ctx: typer.Context,
    *,
    what_went_wrong: str,
    what_to_do: str,
    alternatives: list[str] | tuple[str, ...],
    exit_code: int = EXIT_USAGE,
) -> NoReturn:
    """Print a structured error plus command help to stderr, then exit."""
    typer.echo(format_error(what_went_wrong, what_to_do, alternatives, help_text=ctx.get_help()), err=True)
    raise typer.Exit(exit_code)


def resolve_path(raw_path: str | Path) -> Path:
    """Resolve a path relative to the current working directory."""
    candidate: Path = Path(raw_path).expanduser()
    if candidate.is_absolute():
        return candidate.resolve()
    return (Path.cwd() / candidate).resolve()


def parse_csv_floats(raw: str) -> list[float]:
    """Parse a comma-separated list of floats."""
    return [float(item.strip()) for item in raw.split(",") if item.strip()]


def read_text_input(*, file_path: str | None = None, stdin: bytes = b"") -> str:
    """Read strict UTF-8 text from a file or stdin; ``-`` means stdin."""
    if file_path and file_path != "-":
        return resolve_path(file_path).read_bytes().decode("utf-8")
    return stdin.decode("utf-8")


def load_runtime(
    *,
    lexicon: str | None,
    config: str | None,
    jobs: int | None,
    strict: bool,
    settings: HarnessSettings | None = None,
) -> Runtime:
    """Resolve flags against the environment and load the lexicon once.

    Raises ``ConfigError`` for bad option files and ``StopaError`` subclasses
    for unreadable or (in strict mode) malformed lexical resources.
    """
    if jobs is not None and jobs < 1:
        raise ConfigError(f"--jobs must be at least 1, got {jobs}")
    active: HarnessSettings = settings if settings is not None else get_settings()
    config_path: Path | None = active.resolved_config(config)
    options: ScanOptions = load_options(resolve_path(config_path) if config_path is not None else None)
    lexicon_path: Path | None = active.resolved_lexicon(lexicon)
    context: ScanContext = ScanContext(
        lexicon_path=resolve_path(lexicon_path) if lexicon_path is not None else None,
        lexicon_config=LexiconConfig(strict=strict),
        options=options,
    )
    return Runtime(
        lexicon=context.load(),
        options=options,
        context=context,
        jobs=jobs if jobs is not None else active.jobs,
        strict=strict,
    )


def emit_and_exit(result: CommandResult) -> None:
    """Print a result through the output envelope and propagate its exit code."""
    OutputEnvelope.from_result(result).emit()
    if result.exit_code:
        raise typer.Exit(result.exit_code)


def runtime_failure(exc: StopaError, start: float, example: str) -> CommandResult:
    """Map a ``load_runtime`` failure to the usage (config) or data (lexicon) exit code."""
    if isinstance(exc, ConfigError):
        return error_result(str(exc), "fix the option file or flag value", [f"`{example}` without `--config`"], start)
    return data_error(
        str(exc), "point `--lexicon` at a readable accent dictionary", [f"`{example}` without `--lexicon`"], start
    )
