"""Evaluation against stress-annotated fragments and the agreement statistics."""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Hashable, Sequence
from dataclasses import dataclass
from stopa._compat import StrEnum
from pathlib import Path
from typing import Any, TypeVar

import numpy as np
from pydantic import BaseModel, Field, ValidationError, field_validator

from stopa.config import ScanOptions
from stopa.errors import (
    DegenerateInputError,
    EmptyPoemError,
    LengthMismatchError,
    MalformedRecordError,
    RifmaValidationError,
    StopaError,
)
from stopa.lexicon import Lexicon, LoadReport
from stopa.phonetics import STRESS_MARK, VOWEL_LETTERS, build_syllable_map, count_syllables
from stopa.rhyme import UNRHYMED
from stopa.scansion import PoemScansion, analyze_poem, strip_marks, tokenize_line

logger: logging.Logger = logging.getLogger(__name__)

_CONTINUED_FRACTION_EPS: float = 1e-15
_CONTINUED_FRACTION_TINY: float = 1e-300
_CONTINUED_FRACTION_MAX_ITER: int = 500
_BISECTION_STEPS: int = 200

ModelT = TypeVar("ModelT", bound=BaseModel)


class AnnotatedFragment(BaseModel):
    """A stanza or short poem with gold stress marks and a gold rhyme scheme."""

    lines: list[str]
    scheme: str
    meta: dict[str, Any] = Field(default_factory=dict)


class EvalReport(BaseModel):
    n_fragments: int
    n_lines: int
    line_stress_exact: float = Field(ge=0.0, le=1.0)
    syllable_stress_accuracy: float = Field(ge=0.0, le=1.0)
    scheme_exact: float = Field(ge=0.0, le=1.0)


@dataclass(frozen=True, slots=True)
class FragmentEvaluation:
    """Per-fragment comparison kept for verbose reports."""

    index: int
    gold_lines: tuple[str, ...]
    predicted_lines: tuple[str, ...]
    line_exact: tuple[bool, ...]
    syllables_compared: int
    syllables_matched: int
    gold_scheme: str
    predicted_scheme: str
    meter: str
    technicality: float

    @property
    def scheme_exact(self) -> bool:
        return self.gold_scheme == self.predicted_scheme


class Choice(StrEnum):
    FIRST = "first"
    SECOND = "second"
    TIE = "tie"


# RIFMA reading and writing


def validate_fragment(fragment: AnnotatedFragment) -> str | None:
    """Reason the fragment breaks the format invariants, or None when it is valid."""
    if len(fragment.scheme) != len(fragment.lines):
        return f"scheme {fragment.scheme!r} has {len(fragment.scheme)} labels for {len(fragment.lines)} lines"
    if any(not (label == UNRHYMED or label.isalpha()) for label in fragment.scheme):
        return f"scheme {fragment.scheme!r} may only contain letters and '{UNRHYMED}'"
    for line in fragment.lines:
        for index, char in enumerate(line):
            if char == STRESS_MARK and (index == 0 or line[index - 1].lower() not in VOWEL_LETTERS):
                return f"stress mark at offset {index} of {line!r} does not follow a vowel"
        if count_syllables(line) == 0:
            return f"line {line!r} has no syllables"
    return None


def load_rifma(path: str | Path, *, strict: bool = True) -> tuple[list[AnnotatedFragment], LoadReport]:
    """Read RIFMA JSONL, collecting bad records into a report unless ``strict``."""
    source: Path = Path(path)
    report: LoadReport = LoadReport()
    fragments: list[AnnotatedFragment] = []
    with source.open(encoding="utf-8") as handle:
        for line_number, raw_line in enumerate(handle, start=1):
            if not raw_line.strip():
                continue
            report.records_read += 1
            try:
                fragments.append(_parse_record(source, line_number, raw_line))
            except StopaError as exc:
                if strict:
                    raise
                logger.warning("Skipping RIFMA record: %s", exc)
                report.errors.append(exc)
    logger.info("Loaded %d RIFMA fragments from %s (%d rejected)", len(fragments), source, report.malformed)
    return fragments, report


def parse_rifma(path: str | Path) -> list[AnnotatedFragment]:
    """One fragment per JSONL record; the first bad record raises."""
    fragments, _ = load_rifma(path, strict=True)
    return fragments


def _parse_record(source: Path, line_number: int, raw_line: str) -> AnnotatedFragment:
    try:
        payload: Any = json.loads(raw_line)
    except json.JSONDecodeError as exc:
        raise MalformedRecordError(source, line_number, f"invalid JSON: {exc.msg}") from exc
    if not isinstance(payload, dict):
        raise MalformedRecordError(source, line_number, "record is not a JSON object")
    try:
        fragment: AnnotatedFragment = AnnotatedFragment(
            lines=payload["text"], scheme=payload["scheme"], meta=payload.get("meta") or {}
        )
    except KeyError as exc:
        raise MalformedRecordError(source, line_number, f"missing field {exc.args[0]!r}") from exc
    except ValidationError as exc:
        raise MalformedRecordError(source, line_number, f"bad field types: {exc.error_count()} errors") from exc
    reason: str | None = validate_fragment(fragment)
    if reason is not None:
        raise RifmaValidationError(line_number, reason)
    return fragment


def serialize_rifma(fragments: Sequence[AnnotatedFragment], path: str | Path | None = None) -> str:
    """Write fragments back to RIFMA JSONL; returns the text and writes it when a path is given."""
    records: list[str] = []
    for fragment in fragments:
        payload: dict[str, Any] = {"text": fragment.lines, "scheme": fragment.scheme}
        if fragment.meta:
            payload["meta"] = fragment.meta
        records.append(json.dumps(payload, ensure_ascii=False))
    text: str = "".join(record + "\n" for record in records)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


# Stress and scheme accuracy


def gold_stresses(marked_line: str, lex: Lexicon) -> tuple[frozenset[int], frozenset[int]]:
    """Gold stressed syllables of a marked line and the syllables left out of scoring.

    An unmarked word spelled with ё counts as stressed on ё. Unmarked
    monosyllabic function words are excluded since annotators rarely mark them.
    """
    marked: set[int] = set()
    vowels_seen: int = 0
    for index, char in enumerate(marked_line):
        if char.lower() in VOWEL_LETTERS:
            vowels_seen += 1
        elif char == STRESS_MARK and index > 0 and marked_line[index - 1].lower() in VOWEL_LETTERS:
            marked.add(vowels_seen - 1)

    words: list[str] = [token.text for token in tokenize_line(strip_marks(marked_line))]
    spans: tuple[tuple[int, int], ...] = build_syllable_map(words).spans
    stressed: set[int] = set(marked)
    excluded: set[int] = set()
    for word, (start, end) in zip(words, spans):
        if start == end or any(start <= position < end for position in marked):
            continue
        lowered: str = word.lower()
        if "ё" in lowered:
            stressed.add(start + count_syllables(lowered[: lowered.index("ё")]))
        elif end - start == 1 and lex.is_function_word(lowered):
            excluded.add(start)
    return frozenset(stressed), frozenset(excluded)


def evaluate_fragment(
    index: int, fragment: AnnotatedFragment, lex: Lexicon, options: ScanOptions
) -> FragmentEvaluation:
    plain_text: str = "\n".join(strip_marks(line) for line in fragment.lines)
    poem: PoemScansion = analyze_poem(plain_text, lex, options)
    if len(poem.lines) != len(fragment.lines):
        raise EmptyPoemError(f"fragment {index} scanned into {len(poem.lines)} lines, expected {len(fragment.lines)}")

    line_exact: list[bool] = []
    compared: int = 0
    matched: int = 0
    for gold_line, predicted in zip(fragment.lines, poem.lines):
        gold, excluded = gold_stresses(gold_line, lex)
        predicted_set: frozenset[int] = frozenset(predicted.assignment.stressed_positions) - excluded
        line_exact.append(predicted_set == gold - excluded)
        for syllable in range(predicted.assignment.syllable_map.total_syllables):
            if syllable in excluded:
                continue
            compared += 1
            matched += int((syllable in gold) == (syllable in predicted_set))
    return FragmentEvaluation(
        index=index,
        gold_lines=tuple(fragment.lines),
        predicted_lines=tuple(line.marked_text for line in poem.lines),
        line_exact=tuple(line_exact),
        syllables_compared=compared,
        syllables_matched=matched,
        gold_scheme=fragment.scheme,
        predicted_scheme=poem.rhyme_scheme or "",
        meter=poem.meter_name,
        technicality=poem.poem_technicality,
    )


def evaluate_detailed(
    fragments: Sequence[AnnotatedFragment], lex: Lexicon, options: ScanOptions | None = None
) -> tuple[EvalReport, list[FragmentEvaluation]]:
    """Scan every fragment and aggregate line, syllable and scheme accuracy."""
    active: ScanOptions = options if options is not None else ScanOptions()
    if not fragments:
        raise ValueError("evaluation needs at least one fragment")
    details: list[FragmentEvaluation] = [
        evaluate_fragment(index, fragment, lex, active) for index, fragment in enumerate(fragments)
    ]
    n_lines: int = sum(len(item.line_exact) for item in details)
    exact_lines: int = sum(sum(item.line_exact) for item in details)
    compared: int = sum(item.syllables_compared for item in details)
    matched: int = sum(item.syllables_matched for item in details)
    report: EvalReport = EvalReport(
        n_fragments=len(details),
        n_lines=n_lines,
        line_stress_exact=exact_lines / n_lines if n_lines else 0.0,
        syllable_stress_accuracy=matched / compared if compared else 0.0,
        scheme_exact=sum(item.scheme_exact for item in details) / len(details),
    )
    return report, details


def evaluate(fragments: Sequence[AnnotatedFragment], lex: Lexicon, options: ScanOptions | None = None) -> EvalReport:
    report, _ = evaluate_detailed(fragments, lex, options)
    return report


# Statistics


def pearson_r(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Product-moment correlation and its two-tailed p-value from the t distribution."""
    if len(x) != len(y):
        raise LengthMismatchError(f"x has {len(x)} values but y has {len(y)}")
    if len(x) < 3:
        raise DegenerateInputError("pearson_r needs at least 3 paired values")
    x_values: np.ndarray = np.asarray(x, dtype=float)
    y_values: np.ndarray = np.asarray(y, dtype=float)
    x_centered: np.ndarray = x_values - x_values.mean()
    y_centered: np.ndarray = y_values - y_values.mean()
    x_ss: float = float(np.dot(x_centered, x_centered))
    y_ss: float = float(np.dot(y_centered, y_centered))
    if x_ss == 0.0 or y_ss == 0.0:
        raise DegenerateInputError("pearson_r is undefined for a constant input")
    r: float = float(np.clip(np.dot(x_centered, y_centered) / math.sqrt(x_ss * y_ss), -1.0, 1.0))
    if abs(r) == 1.0:
        return r, 0.0
    degrees: int = len(x) - 2
    t_statistic: float = r * math.sqrt(degrees / (1.0 - r * r))
    return r, t_two_tailed(t_statistic, degrees)


def t_two_tailed(t_statistic: float, degrees_of_freedom: float) -> float:
    """P(|T| >= |t|) for Student's t with the given degrees of freedom."""
    if degrees_of_freedom <= 0:
        raise DegenerateInputError("degrees of freedom must be positive")
    x: float = degrees_of_freedom / (degrees_of_freedom + t_statistic * t_statistic)
    return regularized_incomplete_beta(degrees_of_freedom / 2.0, 0.5, x)


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) by Lentz's continued fraction, using the symmetry relation for fast convergence."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} is outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front: float = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(log_front) * _beta_continued_fraction(a, b, x) / a
    return 1.0 - math.exp(log_front) * _beta_continued_fraction(b, a, 1.0 - x) / b


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    qab: float = a + b
    qap: float = a + 1.0
    qam: float = a - 1.0
    c: float = 1.0
    d: float = 1.0 - qab * x / qap
    if abs(d) < _CONTINUED_FRACTION_TINY:
        d = _CONTINUED_FRACTION_TINY
    d = 1.0 / d
    result: float = d
    for m in range(1, _CONTINUED_FRACTION_MAX_ITER + 1):
        m2: int = 2 * m
        numerator: float = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + numerator * d
        if abs(d) < _CONTINUED_FRACTION_TINY:
            d = _CONTINUED_FRACTION_TINY
        c = 1.0 + numerator / c
        if abs(c) < _CONTINUED_FRACTION_TINY:
            c = _CONTINUED_FRACTION_TINY
        d = 1.0 / d
        result *= d * c
        numerator = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + numerator * d
        if abs(d) < _CONTINUED_FRACTION_TINY:
            d = _CONTINUED_FRACTION_TINY
        c = 1.0 + numerator / c
        if abs(c) < _CONTINUED_FRACTION_TINY:
            c = _CONTINUED_FRACTION_TINY
        d = 1.0 / d
        delta: float = d * c
        result *= delta
        if abs(delta - 1.0) < _CONTINUED_FRACTION_EPS:
            break
    return result


def cohen_kappa(a: Sequence[Hashable], b: Sequence[Hashable]) -> float:
    """Cohen's kappa from the contingency matrix of two label sequences.

    When chance agreement is certain (both raters use one shared label),
    kappa is defined as 1.0 for full agreement and 0.0 otherwise.
    """
    if len(a) != len(b):
        raise LengthMismatchError(f"a has {len(a)} labels but b has {len(b)}")
    if not a:
        raise DegenerateInputError("cohen_kappa needs at least one pair of labels")
    categories: list[Hashable] = list(dict.fromkeys([*a, *b]))
    position: dict[Hashable, int] = {label: index for index, label in enumerate(categories)}
    table: np.ndarray = np.zeros((len(categories), len(categories)), dtype=float)
    for left, right in zip(a, b):
        table[position[left], position[right]] += 1.0
    total: float = float(table.sum())
    observed: float = float(np.trace(table)) / total
    expected: float = float(np.dot(table.sum(axis=1), table.sum(axis=0))) / (total * total)
    if expected == 1.0:
        return 1.0 if observed == 1.0 else 0.0
    return (observed - expected) / (1.0 - expected)


def technicality_choice(
    pairs: Sequence[tuple[str, str]], lex: Lexicon, options: ScanOptions | None = None
) -> list[Choice]:
    """For each poem pair, which member scores the higher poem technicality."""
    active: ScanOptions = options if options is not None else ScanOptions()
    choices: list[Choice] = []
    for first, second in pairs:
        first_score: float = analyze_poem(first, lex, active).poem_technicality
        second_score: float = analyze_poem(second, lex, active).poem_technicality
        choices.append(_choose(first_score, second_score))
    return choices


def agreement_kappa(choices: Sequence[Choice], annotator: Sequence[Choice]) -> float:
    """Kappa between tool choices and annotator choices, dropping pairs the tool scored as a tie."""
    if len(choices) != len(annotator):
        raise LengthMismatchError(f"{len(choices)} tool choices but {len(annotator)} annotator choices")
    kept: list[tuple[Choice, Choice]] = [
        (tool, human) for tool, human in zip(choices, annotator) if tool != Choice.TIE
    ]
    if not kept:
        raise DegenerateInputError("every pair was a tie; kappa is undefined")
    return cohen_kappa([tool for tool, _ in kept], [human for _, human in kept])


# Side-by-side and rating reports


class SideBySidePair(BaseModel):
    """Two poems written for one prompt and the member the annotators preferred."""

    first: str
    second: str
    winner: Choice
    session: str = "1"

    @field_validator("winner")
    @classmethod
    def _no_tie(cls, value: Choice) -> Choice:
        if value == Choice.TIE:
            raise ValueError("annotators must pick the first or the second poem")
        return value


class SideBySideReport(BaseModel):
    """Mean technicality of chosen and rejected poems with 95% margins, and tool/annotator kappa."""

    session: str
    n_pairs: int
    winner_mean: float
    winner_margin: float
    loser_mean: float
    loser_margin: float
    tool_ties: int
    kappa: float | None = None


class RatedPoem(BaseModel):
    text: str
    ratings: list[float] = Field(min_length=1)


class RatingCorrelation(BaseModel):
    n_poems: int
    pearson_r: float
    p_value: float


def t_critical(confidence: float, degrees_of_freedom: float) -> float:
    """Two-tailed critical value of Student's t, by bisection on the tail probability."""
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence {confidence} is outside (0, 1)")
    alpha: float = 1.0 - confidence
    low: float = 0.0
    high: float = 1.0
    while t_two_tailed(high, degrees_of_freedom) > alpha:
        high *= 2.0
    for _ in range(_BISECTION_STEPS):
        middle: float = (low + high) / 2.0
        if t_two_tailed(middle, degrees_of_freedom) > alpha:
            low = middle
        else:
            high = middle
    return (low + high) / 2.0


def mean_with_margin(values: Sequence[float], confidence: float = 0.95) -> tuple[float, float]:
    """Sample mean and the half-width of its t-based confidence interval."""
    if len(values) < 2:
        raise DegenerateInputError("a confidence margin needs at least 2 values")
    data: np.ndarray = np.asarray(values, dtype=float)
    spread: float = float(data.std(ddof=1))
    margin: float = t_critical(confidence, len(data) - 1) * spread / math.sqrt(len(data))
    return float(data.mean()), margin


def _choose(first_score: float, second_score: float) -> Choice:
    if first_score > second_score:
        return Choice.FIRST
    if second_score > first_score:
        return Choice.SECOND
    return Choice.TIE


def side_by_side(
    pairs: Sequence[SideBySidePair], lex: Lexicon, options: ScanOptions | None = None
) -> list[SideBySideReport]:
    """One report per session, in order of first appearance.

    Kappa compares the technicality-based choice with the annotators' choice
    and is None when the tool scored every pair of a session as a tie.
    """
    active: ScanOptions = options if options is not None else ScanOptions()
    sessions: dict[str, list[tuple[SideBySidePair, float, float]]] = {}
    for pair in pairs:
        scored: tuple[SideBySidePair, float, float] = (
            pair,
            analyze_poem(pair.first, lex, active).poem_technicality,
            analyze_poem(pair.second, lex, active).poem_technicality,
        )
        sessions.setdefault(pair.session, []).append(scored)

    reports: list[SideBySideReport] = []
    for session, scored_pairs in sessions.items():
        winners: list[float] = []
        losers: list[float] = []
        tool: list[Choice] = []
        for pair, first_score, second_score in scored_pairs:
            first_won: bool = pair.winner == Choice.FIRST
            winners.append(first_score if first_won else second_score)
            losers.append(second_score if first_won else first_score)
            tool.append(_choose(first_score, second_score))
        winner_mean, winner_margin = mean_with_margin(winners)
        loser_mean, loser_margin = mean_with_margin(losers)
        try:
            kappa: float | None = agreement_kappa(tool, [pair.winner for pair, _, _ in scored_pairs])
        except DegenerateInputError:
            kappa = None
        reports.append(
            SideBySideReport(
                session=session,
                n_pairs=len(scored_pairs),
                winner_mean=winner_mean,
                winner_margin=winner_margin,
                loser_mean=loser_mean,
                loser_margin=loser_margin,
                tool_ties=tool.count(Choice.TIE),
                kappa=kappa,
            )
        )
    logger.info("Side-by-side report over %d pairs in %d sessions", len(pairs), len(reports))
    return reports


def rating_correlation(
    poems: Sequence[RatedPoem], lex: Lexicon, options: ScanOptions | None = None
) -> RatingCorrelation:
    """Pearson r between each poem's mean human rating and its technicality."""
    active: ScanOptions = options if options is not None else ScanOptions()
    mean_ratings: list[float] = [float(np.mean(poem.ratings)) for poem in poems]
    technicalities: list[float] = [analyze_poem(poem.text, lex, active).poem_technicality for poem in poems]
    r, p_value = pearson_r(technicalities, mean_ratings)
    return RatingCorrelation(n_poems=len(poems), pearson_r=r, p_value=p_value)


def load_pairs(path: str | Path, *, strict: bool = True) -> tuple[list[SideBySidePair], LoadReport]:
    """Read ``{first, second, winner[, session]}`` JSONL records."""
    return _load_models(path, SideBySidePair, strict=strict)


def load_ratings(path: str | Path, *, strict: bool = True) -> tuple[list[RatedPoem], LoadReport]:
    """Read ``{text, ratings}`` JSONL records."""
    return _load_models(path, RatedPoem, strict=strict)


def _load_models(
    path: str | Path, model: type[ModelT], *, strict: bool
) -> tuple[list[ModelT], LoadReport]:
    source: Path = Path(path)
    report: LoadReport = LoadReport()
    items: list[ModelT] = []
    with source.open(encoding="utf-8") as handle:
        for line_number, raw_line in enumerate(handle, start=1):
            if not raw_line.strip():
                continue
            report.records_read += 1
            try:
                items.append(model.model_validate_json(raw_line))
            except ValidationError as exc:
                error: MalformedRecordError = MalformedRecordError(
                    source, line_number, f"invalid record: {exc.error_count()} errors"
                )
                if strict:
                    raise error from exc
                logger.warning("Skipping record: %s", error)
                report.errors.append(error)
    return items, report
