"""Typer root app for the stopa harness."""

from __future__ import annotations

import logging
import sys

import typer

from harness.commands import register_commands
from harness.config import get_settings

LOG_FORMAT: str = "%(asctime)s %(name)s %(levelname)s %(message)s"
LOG_LEVELS: tuple[str, ...] = ("DEBUG", "INFO", "WARNING", "ERROR")

app = typer.Typer(
    name="stopa",
    help=(
        "Russian syllabo-tonic scansion: meter, stress markup, rhyme schemes and corpus filtering.\n\n"
        "Examples:\n"
        "  stopa analyze poem.txt\n"
        "  stopa filter corpus.jsonl --min-technicality 0.9 -o clean.jsonl\n"
        "  stopa stats corpus.jsonl --thresholds 0.7,0.8,0.9 --format tsv\n"
        "  stopa eval --verbose\n"
    ),
    add_completion=False,
    no_args_is_help=True,
)


@app.callback()
def main(
    log_level: str | None = typer.Option(
        None, "--log-level", help="DEBUG, INFO, WARNING or ERROR. Defaults to STOPA_LOG_LEVEL or WARNING."
    ),
) -> None:
    """Configure stderr logging before any command runs."""
    level: str = (log_level or get_settings().log_level).upper()
    if level not in LOG_LEVELS:
        typer.echo(
            "What went wrong: unknown log level `" + level + "`.\n"
            "What to do instead: pass one of " + ", ".join(LOG_LEVELS) + ".\n"
            "Available alternatives: `stopa --log-level INFO analyze poem.txt`",
            err=True,
        )
        raise typer.Exit(1)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


register_commands(app)
