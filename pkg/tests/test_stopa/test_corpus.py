"""Tests for corpus reading, filtering and statistics."""

from __future__ import annotations

import io
import json
import random
import time
from pathlib import Path

import pandas as pd
import pytest

from stopa.config import ScanOptions
from stopa.corpus import (
    HISTOGRAM_BINS,
    CorpusReadReport,
    CorpusRecord,
    CorpusStats,
    FilterSummary,
    ScanContext,
    ScanResult,
    analyze_texts,
    compute_stats,
    filter_results,
    histogram_frame,
    meter_frame,
    read_corpus,
    scan_records,
    threshold_frame,
)
from stopa.errors import MalformedRecordError
from stopa.lexicon import Lexicon


def _synthetic_results(count: int, seed: int) -> list[ScanResult]:
    """Scan results with random line scores, one in twenty unscannable."""
    rng: random.Random = random.Random(seed)
    results: list[ScanResult] = []
    for index in range(count):
        record: CorpusRecord = CorpusRecord(id=f"p{index}", text="x")
        if index % 20 == 0:
            results.append(ScanResult(record=record, error="no scannable lines"))
            continue
        scores: list[float] = [rng.random() ** 0.3 for _ in range(rng.randint(1, 8))]
        meter: str = rng.choice(["iamb", "trochee", "other"])
        results.append(ScanResult(record=record, meter=meter, technicality=sum(scores) / len(scores), line_scores=scores))
    return results


class TestReadCorpus:
    """Streaming JSONL records."""

    def test_last_duplicate_wins_in_input_order(self):
        lines: list[str] = [
            json.dumps({"id": "a", "text": "first"}),
            json.dumps({"id": "b", "text": "second"}),
            "",
            json.dumps({"id": "a", "text": "third"}),
        ]
        report: CorpusReadReport = CorpusReadReport()
        records: list[CorpusRecord] = list(read_corpus(lines, report=report))
        assert [(record.id, record.text) for record in records] == [("b", "second"), ("a", "third")]
        assert report.duplicates == 1
        assert report.records_read == 3

    def test_malformed_later_duplicate_keeps_the_valid_record(self):
        lines: list[str] = [
            json.dumps({"id": "a", "text": "first"}),
            json.dumps({"id": "a", "text": 5}),
            json.dumps({"id": "b"}),
        ]
        report: CorpusReadReport = CorpusReadReport()
        records: list[CorpusRecord] = list(read_corpus(lines, report=report))
        assert [(record.id, record.text) for record in records] == [("a", "first")]
        assert report.malformed == 2
        assert report.duplicates == 0

    def test_unknown_fields_pass_through(self):
        lines: list[str] = [json.dumps({"id": "a", "text": "т", "author": "X", "source": {"page": 3}})]
        record: CorpusRecord = next(read_corpus(lines))
        assert record.model_dump() == {"id": "a", "text": "т", "author": "X", "source": {"page": 3}}

    def test_malformed_records_are_counted(self):
        lines: list[str] = [
            "{broken",
            json.dumps([1, 2]),
            json.dumps({"id": "", "text": "т"}),
            json.dumps({"id": "ok", "text": "т"}),
        ]
        report: CorpusReadReport = CorpusReadReport()
        records: list[CorpusRecord] = list(read_corpus(lines, report=report))
        assert [record.id for record in records] == ["ok"]
        assert report.malformed == 3
        assert [error.line_number for error in report.errors] == [1, 2, 3]

    def test_strict_reading_raises(self):
        with pytest.raises(MalformedRecordError) as excinfo:
            list(read_corpus([json.dumps({"id": "a", "text": "т"}), json.dumps({"text": "т"})], strict=True))
        assert excinfo.value.line_number == 2

    def test_reads_from_a_path(self, corpus_path: Path):
        assert len(list(read_corpus(corpus_path))) == 16


class TestScanRecords:
    """Scanning corpus records serially and in a process pool."""

    def test_fixture_corpus_meters(self, lexicon: Lexicon, corpus_path: Path):
        context: ScanContext = ScanContext()
        stats: CorpusStats = compute_stats(scan_records(read_corpus(corpus_path), context, lexicon=lexicon))
        assert stats.n_poems == 16
        assert stats.meter_histogram == {"iamb": 10, "trochee": 6}
        assert stats.unscannable == 0

    def test_unscannable_records_are_reported(self, lexicon: Lexicon):
        records: list[CorpusRecord] = [CorpusRecord(id="empty", text=" — \n…")]
        results: list[ScanResult] = list(scan_records(records, ScanContext(), lexicon=lexicon))
        assert not results[0].scannable
        assert results[0].error

    def test_process_pool_keeps_input_order(self, lexicon: Lexicon, corpus_path: Path):
        """Two workers give the same results in the same order as a serial run."""
        context: ScanContext = ScanContext()
        records: list[CorpusRecord] = list(read_corpus(corpus_path))
        serial: list[ScanResult] = list(scan_records(records, context, lexicon=lexicon))
        parallel: list[ScanResult] = list(scan_records(records, context, jobs=2))
        assert [result.record.id for result in parallel] == [result.record.id for result in serial]
        assert [result.line_scores for result in parallel] == [result.line_scores for result in serial]

    def test_scanning_is_deterministic(self, lexicon: Lexicon, corpus_path: Path):
        context: ScanContext = ScanContext(options=ScanOptions(beam_width=4))
        first: list[ScanResult] = list(scan_records(read_corpus(corpus_path), context, lexicon=lexicon))
        second: list[ScanResult] = list(scan_records(read_corpus(corpus_path), context, lexicon=lexicon))
        assert [(result.meter, result.line_scores) for result in first] == [
            (result.meter, result.line_scores) for result in second
        ]


    def test_analyze_texts_in_a_pool_matches_the_serial_run(self, lexicon: Lexicon):
        texts: list[str] = [
            "Мороз и солнце; день чудесный!\nЕщё ты дремлешь, друг прелестный",
            " — \n…",
            "Буря мглою небо кроет,\nВихри снежные крутя",
        ]
        serial = analyze_texts(texts, ScanContext(), lexicon=lexicon)
        pooled = analyze_texts(texts, ScanContext(), jobs=2)
        assert [outcome.index for outcome in pooled] == [0, 1, 2]
        assert pooled[1].report is None and pooled[1].error
        assert [outcome.report for outcome in pooled] == [outcome.report for outcome in serial]
        assert pooled[2].report is not None and pooled[2].report.meter == "trochee"


class TestFilterResults:
    """Keeping poems whose every line clears the threshold."""

    def test_retained_counts_shrink_as_the_threshold_rises(self):
        results: list[ScanResult] = _synthetic_results(1000, seed=1)
        retained: list[int] = []
        for threshold in (0.5, 0.7, 0.9):
            buffer: io.StringIO = io.StringIO()
            summary: FilterSummary = filter_results(results, threshold, buffer)
            written: list[dict[str, object]] = [json.loads(line) for line in buffer.getvalue().splitlines()]
            assert summary.retained == len(written)
            assert summary.total == 1000
            assert summary.unscannable == 50
            expected: int = sum(
                1 for result in results if result.scannable and min(result.line_scores) >= threshold
            )
            assert summary.retained == expected
            retained.append(summary.retained)
        assert retained[0] >= retained[1] >= retained[2]

    def test_output_carries_meter_and_technicality(self):
        record: CorpusRecord = CorpusRecord.model_validate({"id": "a", "text": "т", "author": "X"})
        result: ScanResult = ScanResult(record=record, meter="iamb", technicality=0.95, line_scores=[0.9, 1.0])
        buffer: io.StringIO = io.StringIO()
        filter_results([result], 0.9, buffer)
        assert json.loads(buffer.getvalue()) == {
            "id": "a",
            "text": "т",
            "author": "X",
            "meter": "iamb",
            "technicality": 0.95,
        }

    def test_read_report_counts_are_copied(self):
        report: CorpusReadReport = CorpusReadReport(records_read=4, malformed=2, duplicates=1)
        summary: FilterSummary = filter_results([], 0.9, io.StringIO(), report)
        assert (summary.total, summary.malformed, summary.duplicates) == (0, 2, 1)

    def test_threshold_must_be_a_share(self):
        with pytest.raises(ValueError):
            filter_results([], 1.5, io.StringIO())


class TestComputeStats:
    """Single-pass statistics."""

    def test_counts_agree_with_a_direct_recount(self):
        results: list[ScanResult] = _synthetic_results(1000, seed=2)
        stats: CorpusStats = compute_stats(results, thresholds=(0.5, 0.7, 0.9))
        scannable: list[ScanResult] = [result for result in results if result.scannable]
        all_scores: list[float] = [score for result in scannable for score in result.line_scores]
        assert stats.n_poems == len(scannable)
        assert stats.n_lines == len(all_scores)
        assert sum(stats.line_score_histogram) == len(all_scores)
        assert len(stats.line_score_histogram) == HISTOGRAM_BINS
        assert sum(stats.meter_histogram.values()) == stats.n_poems
        for index, threshold in enumerate(stats.thresholds):
            assert stats.lines_above[index] == sum(score >= threshold for score in all_scores)
            assert stats.poems_all_lines_above[index] == sum(
                all(score >= threshold for score in result.line_scores) for result in scannable
            )
        assert stats.lines_above == sorted(stats.lines_above, reverse=True)

    def test_meter_histogram_is_sorted_by_count(self):
        record: CorpusRecord = CorpusRecord(id="a", text="т")
        results: list[ScanResult] = [
            ScanResult(record=record, meter="trochee", line_scores=[1.0]),
            ScanResult(record=record, meter="iamb", line_scores=[1.0]),
            ScanResult(record=record, meter="iamb", line_scores=[1.0]),
        ]
        assert list(compute_stats(results).meter_histogram) == ["iamb", "trochee"]

    def test_empty_corpus(self):
        stats: CorpusStats = compute_stats([])
        assert stats.n_poems == 0
        assert stats.n_lines == 0
        assert stats.lines_above == [0, 0, 0]
        assert sum(stats.line_score_histogram) == 0

    def test_out_of_range_thresholds(self):
        with pytest.raises(ValueError):
            compute_stats([], thresholds=(0.5, 1.2))


class TestFrames:
    """Tabular views used by the command line."""

    def test_meter_and_threshold_frames(self):
        stats: CorpusStats = CorpusStats(
            n_poems=4,
            n_lines=10,
            meter_histogram={"iamb": 3, "other": 1},
            thresholds=[0.9],
            lines_above=[5],
            poems_all_lines_above=[1],
        )
        meters: pd.DataFrame = meter_frame(stats)
        assert meters["meter"].tolist() == ["iamb", "other"]
        assert meters["share"].tolist() == ["75.0%", "25.0%"]
        thresholds: pd.DataFrame = threshold_frame(stats)
        assert thresholds.loc[0, "line_share"] == "50.0%"
        assert thresholds.loc[0, "poem_share"] == "25.0%"

    def test_histogram_frame(self):
        counts: list[int] = [0] * HISTOGRAM_BINS
        counts[-1] = 3
        counts[0] = 1
        frame: pd.DataFrame = histogram_frame(CorpusStats(line_score_histogram=counts))
        assert len(frame) == HISTOGRAM_BINS
        assert frame["bin_start"].iloc[0] == 0.0
        assert frame["bin_end"].iloc[-1] == 1.0
        assert frame["share"].iloc[-1] == pytest.approx(0.75)
        assert frame["share"].sum() == pytest.approx(1.0)


@pytest.mark.slow
def test_corpus_throughput(lexicon: Lexicon, corpus_path: Path):
    """Scanning a few hundred poems serially finishes well within a minute."""
    records: list[CorpusRecord] = list(read_corpus(corpus_path)) * 20
    start: float = time.perf_counter()
    results: list[ScanResult] = list(scan_records(records, ScanContext(), lexicon=lexicon))
    assert len(results) == 320
    assert time.perf_counter() - start < 60.0
