"""Streaming corpus processing: record reading, pooled scanning, technicality filtering and statistics."""

from __future__ import annotations

import itertools
import json
import logging
from collections import Counter
from collections.abc import Callable, Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TextIO, TypeVar

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from stopa._compat import batched
from stopa.config import LexiconConfig, ScanOptions
from stopa.errors import MalformedRecordError, StopaError
from stopa.formatting import format_share
from stopa.lexicon import Lexicon, load_lexicon
from stopa.models import PoemReport, poem_report
from stopa.scansion import PoemScansion, analyze_poem, scan_poem

logger: logging.Logger = logging.getLogger(__name__)

HISTOGRAM_BINS: int = 50
DEFAULT_THRESHOLDS: tuple[float, ...] = (0.7, 0.8, 0.9)
BATCH_SIZE: int = 256

ItemT = TypeVar("ItemT")
ResultT = TypeVar("ResultT")


class CorpusRecord(BaseModel):
    """One poem of a JSONL corpus; unknown keys ride along untouched."""

    model_config = ConfigDict(extra="allow")

    id: str = Field(min_length=1)
    text: str


@dataclass(slots=True)
class ScanResult:
    """Scores of one corpus record, or why it could not be scanned."""

    record: CorpusRecord
    meter: str | None = None
    technicality: float | None = None
    line_scores: list[float] = field(default_factory=list)
    error: str | None = None

    @property
    def scannable(self) -> bool:
        return self.error is None

    def all_lines_at_least(self, threshold: float) -> bool:
        return self.scannable and all(score >= threshold for score in self.line_scores)


@dataclass(slots=True)
class CorpusReadReport:
    records_read: int = 0
    malformed: int = 0
    duplicates: int = 0
    errors: list[MalformedRecordError] = field(default_factory=list)


class FilterSummary(BaseModel):
    threshold: float
    total: int = 0
    retained: int = 0
    malformed: int = 0
    unscannable: int = 0
    duplicates: int = 0


class CorpusStats(BaseModel):
    """Single-pass corpus statistics; shares are derived when rendering, never stored."""

    n_poems: int = 0
    n_lines: int = 0
    malformed: int = 0
    unscannable: int = 0
    meter_histogram: dict[str, int] = Field(default_factory=dict)
    line_score_histogram: list[int] = Field(default_factory=lambda: [0] * HISTOGRAM_BINS)
    thresholds: list[float] = Field(default_factory=lambda: list(DEFAULT_THRESHOLDS))
    lines_above: list[int] = Field(default_factory=list)
    poems_all_lines_above: list[int] = Field(default_factory=list)


@dataclass(frozen=True, slots=True)
class ScanContext:
    """Everything a worker process needs to rebuild the lexicon and scan."""

    lexicon_path: Path | None = None
    lexicon_config: LexiconConfig = field(default_factory=LexiconConfig)
    options: ScanOptions = field(default_factory=ScanOptions)

    def load(self) -> Lexicon:
        return load_lexicon(self.lexicon_path, self.lexicon_config)


# Reading


def read_corpus(
    source: str | Path | Sequence[str],
    *,
    strict: bool = False,
    report: CorpusReadReport | None = None,
) -> Iterator[CorpusRecord]:
    """Stream corpus records in input order.

    A first pass only indexes ids so that a repeated id keeps its last
    occurrence without holding the corpus in memory. Malformed records are
    counted and skipped, or raised when ``strict``.
    """
    active: CorpusReadReport = report if report is not None else CorpusReadReport()
    last_seen: dict[str, int] = {}
    for line_number, payload in _iter_payloads(source):
        try:
            record_id: str = _to_record(source, line_number, payload).id
        except MalformedRecordError:
            continue
        if record_id in last_seen:
            active.duplicates += 1
            logger.warning("Duplicate corpus id %r at line %d; the last occurrence wins", record_id, line_number)
        last_seen[record_id] = line_number

    for line_number, payload in _iter_payloads(source):
        active.records_read += 1
        try:
            record: CorpusRecord = _to_record(source, line_number, payload)
        except MalformedRecordError as exc:
            if strict:
                raise
            logger.warning("Skipping corpus record: %s", exc)
            active.malformed += 1
            active.errors.append(exc)
            continue
        if last_seen.get(record.id) != line_number:
            continue
        yield record


def _iter_payloads(source: str | Path | Sequence[str]) -> Iterator[tuple[int, Any]]:
    lines: Iterable[str]
    handle: TextIO | None = None
    if isinstance(source, (str, Path)):
        handle = Path(source).open(encoding="utf-8")
        lines = handle
    else:
        lines = source
    try:
        for line_number, raw_line in enumerate(lines, start=1):
            if not raw_line.strip():
                continue
            try:
                yield line_number, json.loads(raw_line)
            except json.JSONDecodeError as exc:
                yield line_number, exc
    finally:
        if handle is not None:
            handle.close()


def _to_record(source: str | Path | Sequence[str], line_number: int, payload: Any) -> CorpusRecord:
    label: str = str(source) if isinstance(source, (str, Path)) else "<corpus>"
    if isinstance(payload, json.JSONDecodeError):
        raise MalformedRecordError(label, line_number, f"invalid JSON: {payload.msg}")
    if not isinstance(payload, dict):
        raise MalformedRecordError(label, line_number, "record is not a JSON object")
    try:
        return CorpusRecord.model_validate(payload)
    except ValidationError as exc:
        fields: str = ", ".join(".".join(str(part) for part in error["loc"]) for error in exc.errors())
        raise MalformedRecordError(label, line_number, f"invalid fields: {fields}") from exc


# Scanning


def scan_record(record: CorpusRecord, lex: Lexicon, options: ScanOptions) -> ScanResult:
    try:
        poem: PoemScansion = scan_poem(record.text, lex, options)
    except StopaError as exc:
        return ScanResult(record=record, error=str(exc))
    return ScanResult(
        record=record,
        meter=poem.meter_name,
        technicality=poem.poem_technicality,
        line_scores=[line.technicality for line in poem.lines],
    )


@dataclass(frozen=True, slots=True)
class PoemOutcome:
    """The analyze report of one poem, or why it could not be scanned."""

    index: int
    report: PoemReport | None = None
    error: str | None = None


def analyze_text(index: int, text: str, lex: Lexicon, options: ScanOptions) -> PoemOutcome:
    try:
        poem: PoemScansion = analyze_poem(text, lex, options)
    except StopaError as exc:
        return PoemOutcome(index=index, error=str(exc))
    return PoemOutcome(index=index, report=poem_report(index, poem))


_WORKER_STATE: dict[str, Any] = {}


def _init_worker(context: ScanContext) -> None:
    _WORKER_STATE["lexicon"] = context.load()
    _WORKER_STATE["options"] = context.options


def _scan_in_worker(record: CorpusRecord) -> ScanResult:
    return scan_record(record, _WORKER_STATE["lexicon"], _WORKER_STATE["options"])


def _analyze_in_worker(item: tuple[int, str]) -> PoemOutcome:
    return analyze_text(item[0], item[1], _WORKER_STATE["lexicon"], _WORKER_STATE["options"])


def _map_in_pool(
    worker: Callable[[ItemT], ResultT],
    items: Iterable[ItemT],
    context: ScanContext,
    jobs: int,
) -> Iterator[ResultT]:
    """Map ``worker`` over ``items`` in a process pool, keeping input order.

    Items are submitted in fixed-size batches so at most one batch is in
    flight at a time.
    """
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(context,)) as executor:
        for batch in batched(items, BATCH_SIZE):
            yield from executor.map(worker, batch, chunksize=max(1, len(batch) // jobs))


def scan_records(
    records: Iterable[CorpusRecord],
    context: ScanContext,
    *,
    jobs: int = 1,
    lexicon: Lexicon | None = None,
) -> Iterator[ScanResult]:
    """Scan records, in a bounded process pool when ``jobs`` > 1; results come back in input order."""
    if jobs <= 1:
        lex: Lexicon = lexicon if lexicon is not None else context.load()
        for record in records:
            yield scan_record(record, lex, context.options)
        return
    yield from _map_in_pool(_scan_in_worker, records, context, jobs)


def analyze_texts(
    texts: Sequence[str],
    context: ScanContext,
    *,
    jobs: int = 1,
    lexicon: Lexicon | None = None,
) -> list[PoemOutcome]:
    """Analyze poems in input order; a poem that cannot be scanned yields an outcome with ``error`` set."""
    if jobs <= 1 or len(texts) < 2:
        lex: Lexicon = lexicon if lexicon is not None else context.load()
        return [analyze_text(index, text, lex, context.options) for index, text in enumerate(texts)]
    return list(_map_in_pool(_analyze_in_worker, enumerate(texts), context, jobs))


# Filtering and statistics


def filter_results(
    results: Iterable[ScanResult],
    threshold: float,
    output: TextIO,
    read_report: CorpusReadReport | None = None,
) -> FilterSummary:
    """Write records whose every line scores at least ``threshold``, with meter and technicality appended."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold {threshold} is outside [0, 1]")
    summary: FilterSummary = FilterSummary(threshold=threshold)
    for result in results:
        summary.total += 1
        if not result.scannable:
            summary.unscannable += 1
            continue
        if not result.all_lines_at_least(threshold):
            continue
        payload: dict[str, Any] = result.record.model_dump()
        payload["meter"] = result.meter
        payload["technicality"] = result.technicality
        output.write(json.dumps(payload, ensure_ascii=False) + "\n")
        summary.retained += 1
    if read_report is not None:
        summary.malformed = read_report.malformed
        summary.duplicates = read_report.duplicates
    logger.info(
        "Filter at %.3f kept %d of %d records (%d unscannable, %d malformed)",
        threshold,
        summary.retained,
        summary.total,
        summary.unscannable,
        summary.malformed,
    )
    return summary


def compute_stats(
    results: Iterable[ScanResult],
    thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
    read_report: CorpusReadReport | None = None,
) -> CorpusStats:
    """One pass over scan results: meter counts, the 50-bin line histogram and threshold counts."""
    if any(not 0.0 <= threshold <= 1.0 for threshold in thresholds):
        raise ValueError(f"thresholds must lie in [0, 1], got {list(thresholds)}")
    cutoffs: np.ndarray = np.asarray(thresholds, dtype=float)
    histogram: np.ndarray = np.zeros(HISTOGRAM_BINS, dtype=np.int64)
    lines_above: np.ndarray = np.zeros(len(cutoffs), dtype=np.int64)
    poems_above: np.ndarray = np.zeros(len(cutoffs), dtype=np.int64)
    meters: Counter[str] = Counter()
    n_poems: int = 0
    n_lines: int = 0
    unscannable: int = 0

    for result in results:
        if not result.scannable:
            unscannable += 1
            continue
        scores: np.ndarray = np.asarray(result.line_scores, dtype=float)
        n_poems += 1
        n_lines += len(scores)
        meters[result.meter or "other"] += 1
        histogram += np.histogram(scores, bins=HISTOGRAM_BINS, range=(0.0, 1.0))[0]
        at_least: np.ndarray = scores[:, None] >= cutoffs[None, :]
        lines_above += at_least.sum(axis=0)
        poems_above += at_least.all(axis=0)

    return CorpusStats(
        n_poems=n_poems,
        n_lines=n_lines,
        malformed=read_report.malformed if read_report is not None else 0,
        unscannable=unscannable,
        meter_histogram=dict(sorted(meters.items(), key=lambda item: (-item[1], item[0]))),
        line_score_histogram=[int(count) for count in histogram],
        thresholds=[float(value) for value in cutoffs],
        lines_above=[int(count) for count in lines_above],
        poems_all_lines_above=[int(count) for count in poems_above],
    )


def meter_frame(stats: CorpusStats) -> pd.DataFrame:
    rows: list[dict[str, Any]] = [
        {"meter": meter, "poems": count, "share": format_share(count, stats.n_poems)}
        for meter, count in stats.meter_histogram.items()
    ]
    return pd.DataFrame(rows, columns=["meter", "poems", "share"])


def threshold_frame(stats: CorpusStats) -> pd.DataFrame:
    rows: list[dict[str, Any]] = [
        {
            "threshold": threshold,
            "lines_above": lines,
            "line_share": format_share(lines, stats.n_lines),
            "poems_all_lines_above": poems,
            "poem_share": format_share(poems, stats.n_poems),
        }
        for threshold, lines, poems in zip(stats.thresholds, stats.lines_above, stats.poems_all_lines_above)
    ]
    return pd.DataFrame(
        rows, columns=["threshold", "lines_above", "line_share", "poems_all_lines_above", "poem_share"]
    )


def histogram_frame(stats: CorpusStats) -> pd.DataFrame:
    """The line-score histogram as bin edges, counts and shares, ready for CSV export."""
    edges: np.ndarray = np.linspace(0.0, 1.0, HISTOGRAM_BINS + 1)
    counts: np.ndarray = np.asarray(stats.line_score_histogram, dtype=np.int64)
    total: int = int(counts.sum())
    shares: np.ndarray = counts / total if total else np.zeros(HISTOGRAM_BINS)
    return pd.DataFrame({"bin_start": edges[:-1], "bin_end": edges[1:], "lines": counts, "share": shares})
