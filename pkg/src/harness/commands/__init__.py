"""Command registration for the stopa harness."""

from __future__ import annotations

import typer

from harness.commands import analyze, evaluate, filtering, stats


def register_commands(app: typer.Typer) -> None:
    """Register every command on the root Typer app.

    Each command is a leaf so options may follow the positional path.
    """
    app.command("analyze", help=analyze.ANALYZE_HELP)(analyze.analyze_cli_command)
    app.command("filter", help=filtering.FILTER_HELP)(filtering.filter_cli_command)
    app.command("stats", help=stats.STATS_HELP)(stats.stats_cli_command)
    app.command("eval", help=evaluate.EVAL_HELP)(evaluate.eval_cli_command)
