"""Corpus filtering by per-line technicality."""

from __future__ import annotations

import json
import sys
import time
from pathlib import Path
from typing import TextIO

import typer

from harness.commands.common import (
    ConfigOption,
    JobsOption,
    LexiconOption,
    Runtime,
    StrictOption,
    abort_with_help,
    data_error,
    elapsed_ms,
    emit_and_exit,
    error_result,
    load_runtime,
    resolve_path,
    runtime_failure,
    show_help_if_bare,
)
from harness.output import CommandResult
from stopa.corpus import CorpusReadReport, FilterSummary, filter_results, read_corpus, scan_records
from stopa.errors import MalformedRecordError, StopaError

FILTER_HELP = (
    "Keep corpus records whose every line scores at least the threshold.\n\n"
    "Retained records are written as JSONL with `meter` and `technicality` appended;\n"
    "the run summary goes to stderr.\n\n"
    "Examples:\n"
    "  stopa filter corpus.jsonl --min-technicality 0.9 --output clean.jsonl\n"
    "  stopa filter corpus.jsonl --min-technicality 0.75 --jobs 8 > clean.jsonl\n"
)


def filter_command(
    *,
    corpus_path: str,
    min_technicality: float,
    output_path: str | None = None,
    lexicon: str | None = None,
    config: str | None = None,
    jobs: int | None = None,
    strict: bool = False,
    stdout: TextIO | None = None,
) -> CommandResult:
    """Filter a JSONL corpus, streaming retained records to ``output_path`` or stdout.

    Records are written as they are scanned, never buffered; the result body
    stays empty and the run summary travels on stderr.
    """
    start: float = time.perf_counter()
    if not 0.0 <= min_technicality <= 1.0:
        return error_result(
            f"--min-technicality {min_technicality} is outside [0, 1]",
            "pass a threshold between 0 and 1",
            ["`--min-technicality 0.9`", "`--min-technicality 0`"],
            start,
        )
    source: Path = resolve_path(corpus_path)
    if not source.is_file():
        return error_result(
            f"corpus `{corpus_path}` does not exist",
            "pass a JSONL file with one {id, text} record per line",
            ["`stopa filter corpus.jsonl --min-technicality 0.9`"],
            start,
        )
    try:
        runtime: Runtime = load_runtime(lexicon=lexicon, config=config, jobs=jobs, strict=strict)
    except StopaError as exc:
        return runtime_failure(exc, start, "stopa filter corpus.jsonl --min-technicality 0.9")

    read_report: CorpusReadReport = CorpusReadReport()
    try:
        if output_path is not None:
            with resolve_path(output_path).open("w", encoding="utf-8") as handle:
                summary: FilterSummary = _run(source, runtime, min_technicality, handle, read_report)
        else:
            sink: TextIO = stdout if stdout is not None else sys.stdout
            summary = _run(source, runtime, min_technicality, sink, read_report)
            sink.flush()
    except MalformedRecordError as exc:
        return data_error(
            str(exc),
            "fix the record or rerun without `--strict` to skip malformed records",
            [f"`stopa filter {corpus_path} --min-technicality {min_technicality}`"],
            start,
        )
    except UnicodeDecodeError as exc:
        return data_error(
            f"corpus is not valid UTF-8 ({exc.reason} at byte {exc.start})",
            "re-encode the corpus as UTF-8",
            ["`iconv -t utf-8`"],
            start,
        )
    except OSError as exc:
        return error_result(
            f"cannot write `{output_path}`: {exc.strerror or exc}",
            "choose a writable output path",
            ["omit `--output` to write retained records to stdout"],
            start,
        )

    return CommandResult.from_text(
        stderr=json.dumps(summary.model_dump(), ensure_ascii=False), duration_ms=elapsed_ms(start)
    )


def _run(
    source: Path, runtime: Runtime, threshold: float, output: TextIO, read_report: CorpusReadReport
) -> FilterSummary:
    records = read_corpus(source, strict=runtime.strict, report=read_report)
    results = scan_records(records, runtime.context, jobs=runtime.jobs, lexicon=runtime.lexicon)
    return filter_results(results, threshold, output, read_report=read_report)


def filter_cli_command(
    ctx: typer.Context,
    corpus: str | None = typer.Argument(None, help="JSONL corpus with `id` and `text` per record."),
    min_technicality: float = typer.Option(0.9, "--min-technicality", help="Per-line technicality floor in [0, 1]."),
    output: str | None = typer.Option(None, "--output", "-o", help="Write retained records here instead of stdout."),
    lexicon: LexiconOption = None,
    config: ConfigOption = None,
    jobs: JobsOption = None,
    strict: StrictOption = False,
) -> None:
    """Filter a corpus by technicality.

    Example:
      stopa filter corpus.jsonl --min-technicality 0.9 -o clean.jsonl
    """
    show_help_if_bare(ctx, corpus=corpus, output=output, lexicon=lexicon, config=config)
    if corpus is None:
        abort_with_help(
            ctx,
            what_went_wrong="no corpus path given",
            what_to_do="pass the JSONL corpus as the first argument",
            alternatives=["`stopa filter corpus.jsonl --min-technicality 0.9`"],
        )
    emit_and_exit(
        filter_command(
            corpus_path=corpus,
            min_technicality=min_technicality,
            output_path=output,
            lexicon=lexicon,
            config=config,
            jobs=jobs,
            strict=strict,
        )
    )
