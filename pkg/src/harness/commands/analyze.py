"""Poem analysis: meter, technicality, stress markup and rhyme scheme."""

from __future__ import annotations

import logging
import sys
import time

import typer

from harness.commands.common import (
    ConfigOption,
    JobsOption,
    LexiconOption,
    Runtime,
    StrictOption,
    data_error,
    elapsed_ms,
    emit_and_exit,
    error_result,
    load_runtime,
    read_text_input,
    runtime_failure,
)
from harness.output import CommandResult
from stopa.corpus import analyze_texts
from stopa.errors import StopaError
from stopa.models import AnalysisDocument, PoemReport
from stopa.scansion import split_poems

logger: logging.Logger = logging.getLogger(__name__)

ANALYZE_HELP = (
    "Scan poems and print one JSON document with meter, scores, markup and rhyme scheme.\n\n"
    "Poems are separated by blank lines. Without a path, text is read from stdin.\n\n"
    "Examples:\n"
    "  stopa analyze poem.txt\n"
    "  cat poems.txt | stopa analyze --config scan.toml\n"
    "  stopa analyze poems.txt --jobs 4\n"
)
EMPTY_INPUT_NOTICE = "input contains no poems"


def analyze_command(
    *,
    file_path: str | None = None,
    stdin: bytes = b"",
    lexicon: str | None = None,
    config: str | None = None,
    jobs: int | None = None,
    strict: bool = False,
) -> CommandResult:
    """Analyze every poem of a text and return the JSON document."""
    start: float = time.perf_counter()
    try:
        text: str = read_text_input(file_path=file_path, stdin=stdin)
    except UnicodeDecodeError as exc:
        return data_error(
            f"input is not valid UTF-8 ({exc.reason} at byte {exc.start})",
            "re-encode the file as UTF-8",
            ["`iconv -f cp1251 -t utf-8 poem.txt > poem.utf8.txt`"],
            start,
        )
    except OSError as exc:
        return error_result(
            f"cannot read `{file_path}`: {exc.strerror or exc}",
            "pass an existing text file or pipe the poem on stdin",
            ["`stopa analyze poem.txt`", "`cat poem.txt | stopa analyze`"],
            start,
        )

    poems: list[str] = split_poems(text)
    if not poems:
        document: AnalysisDocument = AnalysisDocument(notice=EMPTY_INPUT_NOTICE)
        return CommandResult.from_text(document.model_dump_json(indent=2), duration_ms=elapsed_ms(start))

    try:
        runtime: Runtime = load_runtime(lexicon=lexicon, config=config, jobs=jobs, strict=strict)
    except StopaError as exc:
        return runtime_failure(exc, start, "stopa analyze poem.txt")

    reports: list[PoemReport] = []
    skipped: list[str] = []
    for outcome in analyze_texts(poems, runtime.context, jobs=runtime.jobs, lexicon=runtime.lexicon):
        if outcome.report is None:
            logger.warning("Poem %d could not be scanned: %s", outcome.index, outcome.error)
            skipped.append(f"poem {outcome.index}: {outcome.error}")
            continue
        reports.append(outcome.report)

    document = AnalysisDocument(poems=reports)
    return CommandResult.from_text(
        document.model_dump_json(indent=2),
        stderr="\n".join(f"skipped {item}" for item in skipped),
        duration_ms=elapsed_ms(start),
    )


def analyze_cli_command(
    path: str | None = typer.Argument(None, help="Text file with poems; `-` or omitted reads stdin."),
    lexicon: LexiconOption = None,
    config: ConfigOption = None,
    jobs: JobsOption = None,
    strict: StrictOption = False,
) -> None:
    """Analyze poems from a file or stdin.

    Example:
      stopa analyze poem.txt
    """
    stdin: bytes = b"" if path not in (None, "-") else sys.stdin.buffer.read()
    emit_and_exit(
        analyze_command(file_path=path, stdin=stdin, lexicon=lexicon, config=config, jobs=jobs, strict=strict)
    )
