"""Stress and rhyme evaluation against a RIFMA-format annotated set, plus agreement reports."""

from __future__ import annotations

import time
from stopa._compat import StrEnum
from pathlib import Path

import pandas as pd
import typer
from pydantic import BaseModel

from harness.commands.common import (
    ConfigOption,
    LexiconOption,
    Runtime,
    StrictOption,
    data_error,
    elapsed_ms,
    emit_and_exit,
    error_result,
    load_runtime,
    resolve_path,
    runtime_failure,
)
from harness.output import CommandResult
from stopa.config import GOLDEN_RIFMA_PATH
from stopa.errors import StopaError
from stopa.evaluation import (
    AnnotatedFragment,
    FragmentEvaluation,
    RatedPoem,
    RatingCorrelation,
    SideBySidePair,
    SideBySideReport,
    evaluate_detailed,
    load_pairs,
    load_ratings,
    load_rifma,
    rating_correlation,
    side_by_side,
)
from stopa.formatting import count_marks, format_score, frame_to_markdown, frame_to_tsv, mark_diff
from stopa.lexicon import LoadReport

EVAL_HELP = (
    "Compare predicted stress marks and rhyme schemes with an annotated RIFMA set.\n\n"
    "Without a path the bundled golden set is used. `--pairs` instead reports\n"
    "side-by-side choices (winning/losing technicality with 95% margins and kappa);\n"
    "`--ratings` reports the Pearson correlation with mean human ratings.\n\n"
    "Examples:\n"
    "  stopa eval\n"
    "  stopa eval rifma.jsonl --format markdown --verbose\n"
    "  stopa eval --pairs sbs.jsonl --format tsv\n"
    "  stopa eval --ratings ratings.jsonl\n"
)


class EvalFormat(StrEnum):
    JSON = "json"
    TSV = "tsv"
    MARKDOWN = "markdown"


def eval_command(
    *,
    rifma_path: str | None = None,
    pairs_path: str | None = None,
    ratings_path: str | None = None,
    output_format: str = EvalFormat.JSON,
    verbose: bool = False,
    lexicon: str | None = None,
    config: str | None = None,
    strict: bool = False,
) -> CommandResult:
    """Evaluate the scanner on a RIFMA file, side-by-side pairs or rated poems and render the report."""
    start: float = time.perf_counter()
    if output_format not in {item.value for item in EvalFormat}:
        return error_result(
            f"unknown format `{output_format}`",
            "choose `json`, `tsv` or `markdown`",
            ["`--format json`", "`--format markdown`"],
            start,
        )
    inputs: tuple[tuple[str, str | None], ...] = (
        ("RIFMA path", rifma_path),
        ("--pairs", pairs_path),
        ("--ratings", ratings_path),
    )
    given: list[str] = [name for name, value in inputs if value]
    if len(given) > 1:
        return error_result(
            f"{' and '.join(given)} were given together",
            "run one evaluation at a time",
            ["`stopa eval rifma.jsonl`", "`stopa eval --pairs sbs.jsonl`", "`stopa eval --ratings ratings.jsonl`"],
            start,
        )
    raw_path: str | None = rifma_path or pairs_path or ratings_path
    source: Path = resolve_path(raw_path) if raw_path else GOLDEN_RIFMA_PATH
    if not source.is_file():
        return error_result(
            f"input file `{raw_path}` does not exist",
            "pass an existing JSONL file or omit the path for the bundled golden set",
            ["`stopa eval`"],
            start,
        )
    try:
        runtime: Runtime = load_runtime(lexicon=lexicon, config=config, jobs=1, strict=strict)
    except StopaError as exc:
        return runtime_failure(exc, start, "stopa eval")

    try:
        if pairs_path:
            return _pairs_result(source, runtime, output_format, start)
        if ratings_path:
            return _ratings_result(source, runtime, output_format, start)
        return _rifma_result(source, runtime, output_format, verbose, start)
    except UnicodeDecodeError as exc:
        return data_error(
            f"`{source.name}` is not valid UTF-8 ({exc.reason} at byte {exc.start})",
            "re-encode the file as UTF-8",
            ["`iconv -t utf-8`"],
            start,
        )
    except StopaError as exc:
        return data_error(
            str(exc),
            "fix or remove the record; without `--strict` invalid records are skipped",
            ["`stopa eval` on the bundled golden set"],
            start,
        )


def _rifma_result(source: Path, runtime: Runtime, output_format: str, verbose: bool, start: float) -> CommandResult:
    fragments, load_report = load_rifma(source, strict=runtime.strict)
    if not fragments:
        return _nothing_valid(source, load_report, start)
    report, details = evaluate_detailed(fragments, runtime.lexicon, runtime.options)
    notes: list[str] = _load_notes(load_report)
    if verbose:
        notes.append(_render_details(fragments, details))
    return CommandResult.from_text(
        _render_frame(report_frame(report), output_format, report.model_dump_json(indent=2)),
        stderr="\n".join(notes),
        duration_ms=elapsed_ms(start),
    )


def _pairs_result(source: Path, runtime: Runtime, output_format: str, start: float) -> CommandResult:
    pairs: list[SideBySidePair]
    pairs, load_report = load_pairs(source, strict=runtime.strict)
    if not pairs:
        return _nothing_valid(source, load_report, start)
    reports: list[SideBySideReport] = side_by_side(pairs, runtime.lexicon, runtime.options)
    frame: pd.DataFrame = sessions_frame(reports)
    json_body: str = "[\n" + ",\n".join(report.model_dump_json(indent=2) for report in reports) + "\n]"
    return CommandResult.from_text(
        _render_frame(frame, output_format, json_body),
        stderr="\n".join(_load_notes(load_report)),
        duration_ms=elapsed_ms(start),
    )


def _ratings_result(source: Path, runtime: Runtime, output_format: str, start: float) -> CommandResult:
    poems: list[RatedPoem]
    poems, load_report = load_ratings(source, strict=runtime.strict)
    if not poems:
        return _nothing_valid(source, load_report, start)
    correlation: RatingCorrelation = rating_correlation(poems, runtime.lexicon, runtime.options)
    return CommandResult.from_text(
        _render_frame(report_frame(correlation), output_format, correlation.model_dump_json(indent=2)),
        stderr="\n".join(_load_notes(load_report)),
        duration_ms=elapsed_ms(start),
    )


def _nothing_valid(source: Path, load_report: LoadReport, start: float) -> CommandResult:
    return data_error(
        f"no valid records in `{source}` ({load_report.malformed} rejected)",
        "check the records against the expected JSONL format",
        ["`stopa eval` on the bundled golden set"],
        start,
    )


def report_frame(report: BaseModel) -> pd.DataFrame:
    """A flat report as metric/value rows."""
    return pd.DataFrame(
        [{"metric": name, "value": value} for name, value in report.model_dump().items()],
        columns=["metric", "value"],
    )


def sessions_frame(reports: list[SideBySideReport]) -> pd.DataFrame:
    """One row per side-by-side session, means shown as `mean ± margin`."""
    rows: list[dict[str, object]] = [
        {
            "session": report.session,
            "pairs": report.n_pairs,
            "winning": f"{format_score(report.winner_mean)} ± {format_score(report.winner_margin)}",
            "losing": f"{format_score(report.loser_mean)} ± {format_score(report.loser_margin)}",
            "tool_ties": report.tool_ties,
            "kappa": format_score(report.kappa),
        }
        for report in reports
    ]
    return pd.DataFrame(rows, columns=["session", "pairs", "winning", "losing", "tool_ties", "kappa"])


def _render_frame(frame: pd.DataFrame, output_format: str, json_body: str) -> str:
    if output_format == EvalFormat.TSV:
        return frame_to_tsv(frame)
    if output_format == EvalFormat.MARKDOWN:
        return frame_to_markdown(frame, numeric_right=False)
    return json_body


def _load_notes(load_report: LoadReport) -> list[str]:
    return [f"skipped {error}" for error in load_report.errors]


def _render_details(fragments: list[AnnotatedFragment], details: list[FragmentEvaluation]) -> str:
    """Per-fragment gold/predicted markup, one block per fragment."""
    blocks: list[str] = []
    for fragment, detail in zip(fragments, details):
        label: str = str(fragment.meta.get("id", detail.index))
        header: str = (
            f"fragment {label}: meter={detail.meter} technicality={format_score(detail.technicality)} "
            f"scheme gold={detail.gold_scheme} pred={detail.predicted_scheme}"
            f"{'' if detail.scheme_exact else ' MISMATCH'}"
        )
        lines: list[str] = [header]
        for gold, predicted in zip(detail.gold_lines, detail.predicted_lines):
            lines.append(mark_diff(gold, predicted))
        gold_marks: int = sum(count_marks(line) for line in detail.gold_lines)
        predicted_marks: int = sum(count_marks(line) for line in detail.predicted_lines)
        lines.append(f"  marks: gold {gold_marks}, pred {predicted_marks}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)


def eval_cli_command(
    rifma: str | None = typer.Argument(None, help="RIFMA JSONL file; defaults to the bundled golden set."),
    pairs: str | None = typer.Option(None, "--pairs", help="Side-by-side JSONL of {first, second, winner[, session]}."),
    ratings: str | None = typer.Option(None, "--ratings", help="JSONL of {text, ratings} for the correlation report."),
    output_format: EvalFormat = typer.Option(EvalFormat.JSON, "--format", help="Report format."),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Print per-fragment gold/predicted mark diffs."),
    lexicon: LexiconOption = None,
    config: ConfigOption = None,
    strict: StrictOption = False,
) -> None:
    emit_and_exit(
        eval_command(
            rifma_path=rifma,
            pairs_path=pairs,
            ratings_path=ratings,
            output_format=output_format,
            verbose=verbose,
            lexicon=lexicon,
            config=config,
            strict=strict,
        )
    )
