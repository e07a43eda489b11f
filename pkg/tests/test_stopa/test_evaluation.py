"""Tests for RIFMA handling, stress/scheme accuracy and the agreement statistics."""

from __future__ import annotations

import json
import math
from collections import Counter
from pathlib import Path
from typing import Any

import numpy as np
import pytest
from pydantic import ValidationError

from stopa.config import GOLDEN_RIFMA_PATH
from stopa.errors import DegenerateInputError, LengthMismatchError, MalformedRecordError, RifmaValidationError
from stopa.evaluation import (
    AnnotatedFragment,
    Choice,
    EvalReport,
    FragmentEvaluation,
    agreement_kappa,
    cohen_kappa,
    evaluate,
    evaluate_detailed,
    gold_stresses,
    load_rifma,
    parse_rifma,
    RatedPoem,
    SideBySidePair,
    SideBySideReport,
    load_pairs,
    mean_with_margin,
    pearson_r,
    rating_correlation,
    regularized_incomplete_beta,
    serialize_rifma,
    side_by_side,
    t_critical,
    t_two_tailed,
    technicality_choice,
    validate_fragment,
)
from stopa.lexicon import Lexicon
from stopa.phonetics import STRESS_MARK
from stopa.scansion import analyze_poem

M: str = STRESS_MARK


def _write_jsonl(path: Path, records: list[object]) -> Path:
    path.write_text("".join(json.dumps(record, ensure_ascii=False) + "\n" for record in records), encoding="utf-8")
    return path


GOOD_RECORD: dict[str, object] = {
    "text": [f"Моро{M}з и со{M}лнце; де{M}нь чуде{M}сный!", f"Ещё ты дре{M}млешь, дру{M}г преле{M}стный"],
    "scheme": "AA",
}


class TestRifmaFormat:
    """Reading, validating and writing RIFMA JSONL."""

    def test_golden_set_parses(self):
        fragments: list[AnnotatedFragment] = parse_rifma(GOLDEN_RIFMA_PATH)
        assert len(fragments) == 25
        assert all(validate_fragment(fragment) is None for fragment in fragments)
        assert all("id" in fragment.meta for fragment in fragments)

    def test_golden_lengths_follow_the_dataset_mix(self):
        """Mostly quatrains, then tercets, with single couplet, line and five-line fragments."""
        fragments: list[AnnotatedFragment] = parse_rifma(GOLDEN_RIFMA_PATH)
        assert Counter(len(fragment.lines) for fragment in fragments) == {4: 16, 3: 6, 2: 1, 1: 1, 5: 1}

    def test_golden_set_is_disjoint_from_the_canonical_fixtures(self, canonical_poems: list[dict[str, Any]]):
        fragments: list[AnnotatedFragment] = parse_rifma(GOLDEN_RIFMA_PATH)
        golden_lines: set[str] = {line.replace(M, "") for fragment in fragments for line in fragment.lines}
        canonical_lines: set[str] = {line for poem in canonical_poems for line in poem["text"].splitlines()}
        assert not golden_lines & canonical_lines
        assert not {fragment.meta["id"] for fragment in fragments} & {poem["id"] for poem in canonical_poems}

    def test_scheme_length_must_match_lines(self, tmp_path: Path):
        path: Path = _write_jsonl(tmp_path / "bad.jsonl", [GOOD_RECORD, {"text": ["а"], "scheme": "AB"}])
        with pytest.raises(RifmaValidationError) as excinfo:
            parse_rifma(path)
        assert excinfo.value.line_number == 2

    def test_stress_mark_must_follow_a_vowel(self):
        fragment: AnnotatedFragment = AnnotatedFragment(lines=[f"дом{M}"], scheme="-")
        reason: str | None = validate_fragment(fragment)
        assert reason is not None
        assert "does not follow a vowel" in reason

    def test_invalid_json_reports_the_record_number(self, tmp_path: Path):
        path: Path = tmp_path / "broken.jsonl"
        path.write_text(json.dumps(GOOD_RECORD, ensure_ascii=False) + "\n{not json\n", encoding="utf-8")
        with pytest.raises(MalformedRecordError, match=":2: invalid JSON"):
            parse_rifma(path)

    def test_lenient_loading_collects_errors(self, tmp_path: Path):
        path: Path = _write_jsonl(
            tmp_path / "mixed.jsonl", [GOOD_RECORD, {"scheme": "A"}, {"text": ["а", "б"], "scheme": "A1"}]
        )
        fragments, report = load_rifma(path, strict=False)
        assert len(fragments) == 1
        assert report.records_read == 3
        assert report.malformed == 2

    def test_serialize_then_parse_keeps_fragments(self, tmp_path: Path):
        fragments: list[AnnotatedFragment] = parse_rifma(GOLDEN_RIFMA_PATH)[:3]
        target: Path = tmp_path / "copy.jsonl"
        text: str = serialize_rifma(fragments, target)
        assert text == target.read_text(encoding="utf-8")
        assert parse_rifma(target) == fragments


class TestGoldStresses:
    def test_marked_and_yo_syllables(self, lexicon: Lexicon):
        """Marks give stressed syllables; an unmarked ё counts as stressed."""
        stressed, excluded = gold_stresses(f"Ещё ты дре{M}млешь", lexicon)
        assert stressed == frozenset({1, 3})
        assert excluded == frozenset({2})

    def test_unmarked_function_words_are_excluded(self, lexicon: Lexicon):
        stressed, excluded = gold_stresses(f"Моро{M}з и со{M}лнце", lexicon)
        assert stressed == frozenset({1, 3})
        assert excluded == frozenset({2})


class TestEvaluate:
    """Accuracy of predicted marks and schemes."""

    def test_golden_set_metrics(self, lexicon: Lexicon):
        fragments: list[AnnotatedFragment] = parse_rifma(GOLDEN_RIFMA_PATH)
        report: EvalReport = evaluate(fragments, lexicon)
        assert report.n_fragments == 25
        assert report.n_lines == 90
        assert report.line_stress_exact >= 0.5
        assert report.syllable_stress_accuracy >= 0.85
        assert report.scheme_exact >= 0.5

    def test_detailed_report_keeps_per_fragment_markup(self, lexicon: Lexicon):
        fragments: list[AnnotatedFragment] = parse_rifma(GOLDEN_RIFMA_PATH)[:2]
        report, details = evaluate_detailed(fragments, lexicon)
        assert report.n_fragments == 2
        first: FragmentEvaluation = details[0]
        assert len(first.predicted_lines) == len(first.gold_lines)
        assert first.meter == "iamb"
        assert first.syllables_matched <= first.syllables_compared

    def test_perfect_fragment(self, lexicon: Lexicon):
        fragment: AnnotatedFragment = AnnotatedFragment(
            lines=[f"Моро{M}з и со{M}лнце; де{M}нь чуде{M}сный", f"Моро{M}з и со{M}лнце; де{M}нь чуде{M}сный"],
            scheme="AA",
        )
        report: EvalReport = evaluate([fragment], lexicon)
        assert report.line_stress_exact == 1.0
        assert report.syllable_stress_accuracy == 1.0
        assert report.scheme_exact == 1.0

    def test_no_fragments(self, lexicon: Lexicon):
        with pytest.raises(ValueError):
            evaluate([], lexicon)


class TestPearson:
    """Correlation and its t-distribution p-value."""

    def test_known_values(self):
        """r = 10/sqrt(148), t = 2.5 on 3 degrees of freedom."""
        r, p_value = pearson_r([1, 2, 3, 4, 5], [2, 1, 4, 3, 6])
        assert r == pytest.approx(10 / math.sqrt(148))
        t: float = 2.5
        root3: float = math.sqrt(3.0)
        expected: float = 1.0 - (2.0 / math.pi) * (t / (root3 * (1.0 + t * t / 3.0)) + math.atan(t / root3))
        assert p_value == pytest.approx(expected, rel=1e-9)

    def test_perfect_correlation(self):
        r, p_value = pearson_r([1, 2, 3], [2, 4, 6])
        assert r == 1.0
        assert p_value == 0.0

    def test_one_degree_of_freedom_is_cauchy(self):
        """With df=1 the two-tailed tail is 1 - 2*atan(t)/pi."""
        assert t_two_tailed(1.0, 1) == pytest.approx(0.5)
        assert t_two_tailed(3.0, 1) == pytest.approx(1.0 - 2.0 * math.atan(3.0) / math.pi)

    def test_incomplete_beta_edges(self):
        assert regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
        assert regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0
        # I_x(1, 1) is the uniform CDF.
        assert regularized_incomplete_beta(1.0, 1.0, 0.3) == pytest.approx(0.3)

    def test_degenerate_inputs(self):
        with pytest.raises(LengthMismatchError):
            pearson_r([1, 2, 3], [1, 2])
        with pytest.raises(DegenerateInputError):
            pearson_r([1, 2], [3, 4])
        with pytest.raises(DegenerateInputError):
            pearson_r([1, 1, 1], [1, 2, 3])


class TestKappa:
    """Cohen's kappa and tie-aware agreement."""

    def test_contingency_oracle(self):
        """20/5/10/15 gives p_o = 0.7, p_e = 0.5 and kappa 0.4."""
        a: list[str] = ["yes"] * 25 + ["no"] * 25
        b: list[str] = ["yes"] * 20 + ["no"] * 5 + ["yes"] * 10 + ["no"] * 15
        assert cohen_kappa(a, b) == pytest.approx(0.4)

    def test_full_agreement_and_single_label(self):
        assert cohen_kappa(["x", "y", "x"], ["x", "y", "x"]) == pytest.approx(1.0)
        assert cohen_kappa(["x", "x"], ["x", "x"]) == 1.0

    def test_ties_are_dropped(self):
        tool: list[Choice] = [Choice.FIRST, Choice.TIE, Choice.SECOND, Choice.FIRST]
        human: list[Choice] = [Choice.FIRST, Choice.SECOND, Choice.SECOND, Choice.FIRST]
        assert agreement_kappa(tool, human) == pytest.approx(1.0)
        with pytest.raises(DegenerateInputError):
            agreement_kappa([Choice.TIE], [Choice.FIRST])

    def test_technicality_choice_prefers_the_metrical_poem(self, lexicon: Lexicon, control_text: str):
        regular: str = "Мороз и солнце; день чудесный!\nЕщё ты дремлешь, друг прелестный"
        irregular: str = control_text.split("\n\n")[0]
        choices: list[Choice] = technicality_choice([(regular, irregular), (irregular, regular)], lexicon)
        assert choices == [Choice.FIRST, Choice.SECOND]


REGULAR: str = "Мороз и солнце; день чудесный!\nЕщё ты дремлешь, друг прелестный"
SALAD: str = "Ласточка, вода, ветер, весна.\nВетер, весна, молодость, вода."


class TestConfidenceMargins:
    """Student's t critical values and mean ± margin."""

    @pytest.mark.parametrize(
        "degrees,expected",
        [(1, math.tan(0.475 * math.pi)), (2, 4.302653), (3, 3.182446), (30, 2.042272)],
    )
    def test_critical_values(self, degrees: int, expected: float):
        assert t_critical(0.95, degrees) == pytest.approx(expected, rel=1e-5)

    def test_mean_with_margin(self):
        mean, margin = mean_with_margin([1.0, 2.0, 3.0])
        assert mean == pytest.approx(2.0)
        assert margin == pytest.approx(4.302653 / math.sqrt(3.0), rel=1e-5)

    def test_margin_needs_two_values(self):
        with pytest.raises(DegenerateInputError):
            mean_with_margin([0.5])
        with pytest.raises(ValueError):
            t_critical(1.0, 3)


class TestSideBySide:
    """Winner/loser technicality and tool/annotator agreement per session."""

    def test_report_means_margins_and_kappa(self, lexicon: Lexicon):
        regular: float = analyze_poem(REGULAR, lexicon).poem_technicality
        salad: float = analyze_poem(SALAD, lexicon).poem_technicality
        assert regular > salad
        pairs: list[SideBySidePair] = [
            SideBySidePair(first=REGULAR, second=SALAD, winner=Choice.FIRST),
            SideBySidePair(first=SALAD, second=REGULAR, winner=Choice.SECOND),
            SideBySidePair(first=REGULAR, second=SALAD, winner=Choice.FIRST),
            SideBySidePair(first=REGULAR, second=SALAD, winner=Choice.SECOND),
        ]
        (report,) = side_by_side(pairs, lexicon)
        assert report.session == "1"
        assert report.n_pairs == 4
        assert report.tool_ties == 0
        winners: list[float] = [regular, regular, regular, salad]
        losers: list[float] = [salad, salad, salad, regular]
        assert report.winner_mean == pytest.approx(np.mean(winners))
        assert report.loser_mean == pytest.approx(np.mean(losers))
        assert report.winner_mean > report.loser_mean
        assert report.winner_margin == pytest.approx(3.182446 * np.std(winners, ddof=1) / 2.0, rel=1e-5)
        # Tool picks FIRST, SECOND, FIRST, FIRST against FIRST, SECOND, FIRST, SECOND: p_o 0.75, p_e 0.5.
        assert report.kappa == pytest.approx(0.5)

    def test_sessions_keep_first_appearance_order(self, lexicon: Lexicon):
        pairs: list[SideBySidePair] = [
            SideBySidePair(first=REGULAR, second=SALAD, winner=Choice.FIRST, session="b"),
            SideBySidePair(first=REGULAR, second=SALAD, winner=Choice.FIRST, session="a"),
            SideBySidePair(first=SALAD, second=REGULAR, winner=Choice.SECOND, session="b"),
            SideBySidePair(first=SALAD, second=REGULAR, winner=Choice.SECOND, session="a"),
        ]
        reports: list[SideBySideReport] = side_by_side(pairs, lexicon)
        assert [report.session for report in reports] == ["b", "a"]
        assert all(report.kappa == pytest.approx(1.0) for report in reports)

    def test_identical_poems_leave_kappa_undefined(self, lexicon: Lexicon):
        pairs: list[SideBySidePair] = [
            SideBySidePair(first=REGULAR, second=REGULAR, winner=Choice.FIRST),
            SideBySidePair(first=REGULAR, second=REGULAR, winner=Choice.SECOND),
        ]
        (report,) = side_by_side(pairs, lexicon)
        assert report.tool_ties == 2
        assert report.kappa is None
        assert report.winner_margin == 0.0

    def test_annotators_cannot_tie(self):
        with pytest.raises(ValidationError):
            SideBySidePair(first=REGULAR, second=SALAD, winner=Choice.TIE)

    def test_load_pairs_skips_invalid_records(self, tmp_path: Path):
        good: dict[str, str] = {"first": REGULAR, "second": SALAD, "winner": "first"}
        path: Path = _write_jsonl(tmp_path / "pairs.jsonl", [good, {"first": REGULAR, "winner": "tie"}])
        pairs, report = load_pairs(path, strict=False)
        assert len(pairs) == 1
        assert report.malformed == 1
        with pytest.raises(MalformedRecordError, match=":2:"):
            load_pairs(path)


class TestRatingCorrelation:
    def test_correlates_mean_ratings_with_technicality(self, lexicon: Lexicon):
        poems: list[RatedPoem] = [
            RatedPoem(text=REGULAR, ratings=[5, 4]),
            RatedPoem(text=SALAD, ratings=[1, 2, 2]),
            RatedPoem(text=REGULAR, ratings=[4]),
        ]
        correlation = rating_correlation(poems, lexicon)
        technicalities: list[float] = [analyze_poem(poem.text, lexicon).poem_technicality for poem in poems]
        expected: float = float(np.corrcoef(technicalities, [4.5, 5.0 / 3.0, 4.0])[0, 1])
        assert correlation.n_poems == 3
        assert correlation.pearson_r == pytest.approx(expected)
        assert correlation.pearson_r > 0.9
        assert 0.0 <= correlation.p_value <= 1.0

    def test_needs_three_poems(self, lexicon: Lexicon):
        with pytest.raises(DegenerateInputError):
            rating_correlation([RatedPoem(text=REGULAR, ratings=[1]), RatedPoem(text=SALAD, ratings=[2])], lexicon)
