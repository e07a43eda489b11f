"""Corpus statistics: meter distribution, line-score histogram and threshold counts."""

from __future__ import annotations

import time
from stopa._compat import StrEnum
from pathlib import Path

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
    parse_csv_floats,
    resolve_path,
    runtime_failure,
    show_help_if_bare,
)
from harness.output import CommandResult
from stopa.corpus import (
    DEFAULT_THRESHOLDS,
    CorpusReadReport,
    CorpusStats,
    compute_stats,
    histogram_frame,
    meter_frame,
    read_corpus,
    scan_records,
    threshold_frame,
)
from stopa.errors import MalformedRecordError, StopaError
from stopa.formatting import frame_to_tsv

STATS_HELP = (
    "Compute corpus statistics in one pass over a JSONL corpus.\n\n"
    "Examples:\n"
    "  stopa stats corpus.jsonl\n"
    "  stopa stats corpus.jsonl --thresholds 0.7,0.8,0.9 --format tsv\n"
    "  stopa stats corpus.jsonl --histogram-csv line_scores.csv\n"
)


class StatsFormat(StrEnum):
    JSON = "json"
    TSV = "tsv"


def stats_command(
    *,
    corpus_path: str,
    thresholds: str | None = None,
    output_format: str = StatsFormat.JSON,
    histogram_csv: str | None = None,
    lexicon: str | None = None,
    config: str | None = None,
    jobs: int | None = None,
    strict: bool = False,
) -> CommandResult:
    start: float = time.perf_counter()
    try:
        cutoffs: list[float] = parse_csv_floats(thresholds) if thresholds else list(DEFAULT_THRESHOLDS)
    except ValueError:
        return error_result(
            f"--thresholds `{thresholds}` is not a comma-separated list of numbers",
            "pass thresholds like `0.7,0.8,0.9`",
            ["omit `--thresholds` for 0.7,0.8,0.9"],
            start,
        )
    if not cutoffs or any(not 0.0 <= value <= 1.0 for value in cutoffs):
        return error_result(
            f"--thresholds `{thresholds}` must list values in [0, 1]",
            "pass thresholds between 0 and 1",
            ["`--thresholds 0.7,0.8,0.9`"],
            start,
        )
    if output_format not in {item.value for item in StatsFormat}:
        return error_result(
            f"unknown format `{output_format}`",
            "choose `json` or `tsv`",
            ["`--format json`", "`--format tsv`"],
            start,
        )
    source: Path = resolve_path(corpus_path)
    if not source.is_file():
        return error_result(
            f"corpus `{corpus_path}` does not exist",
            "pass a JSONL file with one {id, text} record per line",
            ["`stopa stats corpus.jsonl`"],
            start,
        )
    try:
        runtime: Runtime = load_runtime(lexicon=lexicon, config=config, jobs=jobs, strict=strict)
    except StopaError as exc:
        return runtime_failure(exc, start, "stopa stats corpus.jsonl")

    read_report: CorpusReadReport = CorpusReadReport()
    try:
        records = read_corpus(source, strict=runtime.strict, report=read_report)
        results = scan_records(records, runtime.context, jobs=runtime.jobs, lexicon=runtime.lexicon)
        stats: CorpusStats = compute_stats(results, cutoffs, read_report=read_report)
    except MalformedRecordError as exc:
        return data_error(
            str(exc),
            "fix the record or rerun without `--strict` to skip malformed records",
            [f"`stopa stats {corpus_path}`"],
            start,
        )
    except UnicodeDecodeError as exc:
        return data_error(
            f"corpus is not valid UTF-8 ({exc.reason} at byte {exc.start})",
            "re-encode the corpus as UTF-8",
            ["`iconv -t utf-8`"],
            start,
        )

    notes: list[str] = []
    if histogram_csv is not None:
        target: Path = resolve_path(histogram_csv)
        try:
            histogram_frame(stats).to_csv(target, index=False)
        except OSError as exc:
            return error_result(
                f"cannot write `{histogram_csv}`: {exc.strerror or exc}",
                "choose a writable path for the histogram CSV",
                ["omit `--histogram-csv`"],
                start,
            )
        notes.append(f"histogram written to {target}")
    if read_report.duplicates:
        notes.append(f"{read_report.duplicates} duplicate ids; the last occurrence of each was used")

    if output_format == StatsFormat.TSV:
        body: str = "\n".join([frame_to_tsv(meter_frame(stats)), frame_to_tsv(threshold_frame(stats))])
    else:
        body = stats.model_dump_json(indent=2)
    return CommandResult.from_text(body, stderr="\n".join(notes), duration_ms=elapsed_ms(start))


def stats_cli_command(
    ctx: typer.Context,
    corpus: str | None = typer.Argument(None, help="JSONL corpus with `id` and `text` per record."),
    thresholds: str | None = typer.Option(None, "--thresholds", help="Comma-separated thresholds in [0, 1]."),
    output_format: StatsFormat = typer.Option(StatsFormat.JSON, "--format", help="Output format."),
    histogram_csv: str | None = typer.Option(None, "--histogram-csv", help="Also write the 50-bin line histogram CSV."),
    lexicon: LexiconOption = None,
    config: ConfigOption = None,
    jobs: JobsOption = None,
    strict: StrictOption = False,
) -> None:
    """Compute corpus statistics.

    Example:
      stopa stats corpus.jsonl --thresholds 0.7,0.8,0.9
    """
    show_help_if_bare(ctx, corpus=corpus, thresholds=thresholds, histogram_csv=histogram_csv, lexicon=lexicon)
    if corpus is None:
        abort_with_help(
            ctx,
            what_went_wrong="no corpus path given",
            what_to_do="pass the JSONL corpus as the first argument",
            alternatives=["`stopa stats corpus.jsonl`"],
        )
    emit_and_exit(
        stats_command(
            corpus_path=corpus,
            thresholds=thresholds,
            output_format=output_format,
            histogram_csv=histogram_csv,
            lexicon=lexicon,
            config=config,
            jobs=jobs,
            strict=strict,
        )
    )
