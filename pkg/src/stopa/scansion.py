"""Stress placement, technicality scoring and meter detection for verse lines.

Each line becomes a lattice of per-word stress variants. A template-specific
search picks one variant per word so that the resulting stress pattern fits
the meter with the smallest defect cost, and the poem's meter is the template
with the best mean line score.
"""

from __future__ import annotations

import dataclasses
import heapq
import itertools
import math
import re
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass
from stopa._compat import StrEnum

from stopa.config import ScanOptions
from stopa.errors import EmptyLineError, EmptyPoemError, VariantCapError
from stopa.lexicon import AccentEntry, Lexicon
from stopa.phonetics import STRESS_MARK, SyllableMap, build_syllable_map, count_syllables, vowel_char_indices
from stopa.rhyme import detect_scheme

OTHER_METER: str = "other"


class MeterName(StrEnum):
    TROCHEE = "trochee"
    IAMB = "iamb"
    DACTYL = "dactyl"
    AMPHIBRACH = "amphibrach"
    ANAPEST = "anapest"


@dataclass(frozen=True, slots=True)
class MeterTemplate:
    """Periodic ictus pattern: syllable ``i`` is strong when ``i % period == ictus_offset``."""

    name: MeterName
    period: int
    ictus_offset: int

    def is_ictus(self, syllable: int) -> bool:
        return syllable % self.period == self.ictus_offset

    def ictus_count(self, n_syllables: int) -> int:
        return len(range(self.ictus_offset, n_syllables, self.period))


# Order matters: it is the tie-break order for meter selection.
TEMPLATES: tuple[MeterTemplate, ...] = (
    MeterTemplate(MeterName.TROCHEE, 2, 0),
    MeterTemplate(MeterName.IAMB, 2, 1),
    MeterTemplate(MeterName.DACTYL, 3, 0),
    MeterTemplate(MeterName.AMPHIBRACH, 3, 1),
    MeterTemplate(MeterName.ANAPEST, 3, 2),
)


def get_template(name: str) -> MeterTemplate:
    """Look up a template by meter name."""
    for template in TEMPLATES:
        if template.name == name:
            return template
    raise ValueError(f"Unknown meter: {name}")


class VariantOrigin(StrEnum):
    LEXICAL = "lexical"
    FUNCTION_UNSTRESSED = "function-unstressed"
    COLLOCATION = "collocation"
    OOV_RULE = "oov-rule"
    OOV_METER_FIT = "oov-meter-fit"


@dataclass(frozen=True, slots=True)
class WordVariant:
    """One way of realizing a word: a stressed syllable (or none) and its cost."""

    token_index: int
    stress: int | None
    origin: VariantOrigin
    base_penalty: float = 0.0


@dataclass(frozen=True, slots=True)
class StressAssignment:
    """Chosen realization of every token of a line.

    ``admissible`` keeps, per token, every stress position the lattice offered
    so that avoidable ictus misses can be recognised after the fact.
    """

    syllable_map: SyllableMap
    stressed: tuple[bool, ...]
    chosen: tuple[WordVariant | None, ...]
    admissible: tuple[frozenset[int], ...]

    @property
    def stressed_positions(self) -> tuple[int, ...]:
        return tuple(index for index, flag in enumerate(self.stressed) if flag)


@dataclass(frozen=True, slots=True)
class LineDefects:
    """Breakdown of everything that kept a line from a perfect score under one template."""

    off_ictus: int = 0
    off_ictus_mono: int = 0
    avoidable_misses: int = 0
    penalty: float = 0.0
    stressed_ictuses: int = 0
    n_ictus: int = 0


@dataclass(frozen=True, slots=True)
class Token:
    """A word or punctuation run plus the whitespace that followed it in the source line."""

    text: str
    space_after: str = ""


@dataclass(frozen=True, slots=True)
class LineScansion:
    text: str
    tokens: tuple[Token, ...]
    assignment: StressAssignment
    meter: MeterTemplate
    technicality: float
    marked_text: str
    low_confidence: bool
    defects: LineDefects
    template_scores: dict[MeterName, float]


@dataclass(frozen=True, slots=True)
class PoemScansion:
    """Scansion of a whole poem; ``poem_meter`` is None when the meter is 'other'."""

    lines: tuple[LineScansion, ...]
    poem_meter: MeterTemplate | None
    poem_technicality: float
    rhyme_scheme: str | None = None

    @property
    def meter_name(self) -> str:
        return str(self.poem_meter.name) if self.poem_meter is not None else OTHER_METER


# Tokenization and markup


def tokenize_line(line: str) -> list[Token]:
    """Split on whitespace, peeling leading and trailing punctuation into separate tokens.

    Concatenating ``text + space_after`` over the result reproduces the line.
    Hyphenated compounds stay whole.
    """
    tokens: list[Token] = []
    lead: int = len(line) - len(line.lstrip())
    if lead:
        tokens.append(Token("", line[:lead]))
    for match in _CHUNK.finditer(line, lead):
        parts: list[str] = _split_punctuation(match.group(1))
        for index, part in enumerate(parts):
            tokens.append(Token(part, match.group(2) if index == len(parts) - 1 else ""))
    return tokens


def split_poems(text: str) -> list[str]:
    """Split text into poems separated by one or more blank lines."""
    poems: list[str] = []
    current: list[str] = []
    for line in text.splitlines():
        if line.strip():
            current.append(line)
        elif current:
            poems.append("\n".join(current))
            current = []
    if current:
        poems.append("\n".join(current))
    return poems


def emit_markup(tokens: Sequence[Token], assignment: StressAssignment) -> str:
    """Insert U+0301 after every stressed vowel letter; everything else is copied verbatim."""
    pieces: list[str] = []
    for index, token in enumerate(tokens):
        text: str = token.text
        variant: WordVariant | None = assignment.chosen[index]
        if variant is not None and variant.stress is not None:
            char_index: int = vowel_char_indices(text)[variant.stress - 1]
            text = text[: char_index + 1] + STRESS_MARK + text[char_index + 1 :]
        pieces.append(text + token.space_after)
    return "".join(pieces)


def strip_marks(text: str) -> str:
    return text.replace(STRESS_MARK, "")


_CHUNK = re.compile(r"(\S+)(\s*)")


def _is_word_char(char: str) -> bool:
    return char.isalnum() or char == STRESS_MARK


def _split_punctuation(chunk: str) -> list[str]:
    start: int = 0
    while start < len(chunk) and not _is_word_char(chunk[start]):
        start += 1
    end: int = len(chunk)
    while end > start and not _is_word_char(chunk[end - 1]):
        end -= 1
    return [part for part in (chunk[:start], chunk[start:end], chunk[end:]) if part]


# Word variants and the line lattice


def word_variants(token: str, lex: Lexicon, options: ScanOptions, token_index: int = 0) -> list[WordVariant]:
    """Every admissible realization of one word, with its base penalty.

    Function words may stay unstressed for free or take their stress at a
    small cost. Dictionary words offer each listed stress. Unknown words offer
    the predictor's candidates and, with ``oov_fit_meter``, every syllable.
    """
    n_syllables: int = count_syllables(token)
    if n_syllables == 0:
        raise ValueError(f"{token!r} has no syllables and cannot carry stress")
    entry: AccentEntry | None = lex.resolve_hyphenated(token)
    variants: list[WordVariant]
    if lex.is_function_word(token) or (entry is not None and entry.is_function_word):
        positions: Sequence[int] = entry.stress_positions if entry is not None else lex.predict_oov_stress(token)
        variants = [WordVariant(token_index, None, VariantOrigin.FUNCTION_UNSTRESSED, 0.0)]
        variants.extend(
            WordVariant(token_index, position, VariantOrigin.LEXICAL, options.unstress_preference)
            for position in positions
        )
    elif entry is not None:
        variants = [WordVariant(token_index, position, VariantOrigin.LEXICAL, 0.0) for position in entry.stress_positions]
    else:
        candidates: list[int] = lex.predict_oov_stress(token)
        variants = [
            WordVariant(
                token_index,
                position,
                VariantOrigin.OOV_RULE,
                0.0 if rank == 0 else options.oov_alternative_penalty,
            )
            for rank, position in enumerate(candidates)
        ]
        if options.oov_fit_meter:
            variants.extend(
                WordVariant(token_index, position, VariantOrigin.OOV_METER_FIT, options.oov_fit_penalty)
                for position in range(1, n_syllables + 1)
            )
    return _apply_penalty_cutoff(variants, options.variant_penalty_cutoff)


def _apply_penalty_cutoff(variants: list[WordVariant], cutoff: float | None) -> list[WordVariant]:
    if cutoff is None:
        return variants
    kept: list[WordVariant] = [variant for variant in variants if variant.base_penalty <= cutoff]
    if kept:
        return kept
    cheapest: float = min(variant.base_penalty for variant in variants)
    return [variant for variant in variants if variant.base_penalty == cheapest]


@dataclass(frozen=True, slots=True)
class _Segment:
    """One or more adjacent tokens that are realized together (a word or a collocation)."""

    members: tuple[int, ...]
    realizations: tuple[tuple[WordVariant, ...], ...]


@dataclass(frozen=True, slots=True)
class _Step:
    costs: tuple[float, ...]
    hits: int
    function_stresses: int
    pattern: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class _Hypothesis:
    cost: float
    hits: int
    function_stresses: int
    pattern: tuple[int, ...]
    choices: tuple[int, ...]

    def rank(self) -> tuple[float, int, tuple[int, ...]]:
        return (self.cost, self.function_stresses, self.pattern)


class LineLattice:
    """Per-line variant lattice, built once and searched under each template."""

    def __init__(self, words: Sequence[str], lex: Lexicon, options: ScanOptions) -> None:
        self.words: tuple[str, ...] = tuple(words)
        self.syllable_map: SyllableMap = build_syllable_map(self.words)
        self.function_words: tuple[bool, ...] = tuple(lex.is_function_word(word) for word in self.words)
        self.segments: tuple[_Segment, ...] = tuple(self._segment(lex, options))
        admissible: list[set[int]] = [set() for _ in self.words]
        for segment in self.segments:
            for realization in segment.realizations:
                for variant in realization:
                    if variant.stress is not None:
                        admissible[variant.token_index].add(variant.stress)
        self.admissible: tuple[frozenset[int], ...] = tuple(frozenset(positions) for positions in admissible)

    @property
    def total_syllables(self) -> int:
        return self.syllable_map.total_syllables

    @property
    def variant_product(self) -> int:
        return math.prod(len(segment.realizations) for segment in self.segments)

    def _segment(self, lex: Lexicon, options: ScanOptions) -> list[_Segment]:
        segments: list[_Segment] = []
        index: int = 0
        while index < len(self.words):
            collocation = lex.match_collocation(self.words, index)
            if collocation is not None:
                rule, width = collocation
                stressed_token: int = index + rule.stressed_index - 1
                members: tuple[int, ...] = tuple(
                    member for member in range(index, index + width) if count_syllables(self.words[member])
                )
                realization: tuple[WordVariant, ...] = tuple(
                    WordVariant(
                        member,
                        rule.stress_position if member == stressed_token else None,
                        VariantOrigin.COLLOCATION,
                    )
                    for member in members
                )
                segments.append(_Segment(members, (realization,)))
                index += width
                continue
            if count_syllables(self.words[index]):
                variants: list[WordVariant] = word_variants(self.words[index], lex, options, index)
                segments.append(_Segment((index,), tuple((variant,) for variant in variants)))
            index += 1
        return segments

    def _steps(self, template: MeterTemplate, options: ScanOptions) -> list[list[_Step]]:
        steps: list[list[_Step]] = []
        for segment in self.segments:
            options_for_segment: list[_Step] = []
            for realization in segment.realizations:
                costs: list[float] = []
                hits: int = 0
                function_stresses: int = 0
                pattern: list[int] = []
                for variant in realization:
                    start, end = self.syllable_map.spans[variant.token_index]
                    defects: LineDefects = _word_defects(start, end, variant, self.admissible[variant.token_index], template)
                    costs.append(_defect_cost(defects, options))
                    hits += defects.stressed_ictuses
                    if variant.stress is not None and self.function_words[variant.token_index]:
                        function_stresses += 1
                    pattern.extend(0 if variant.stress == local + 1 else 1 for local in range(end - start))
                options_for_segment.append(_Step(tuple(costs), hits, function_stresses, tuple(pattern)))
            steps.append(options_for_segment)
        return steps

    def search(
        self,
        template: MeterTemplate,
        options: ScanOptions,
        *,
        beam_width: int | None = None,
    ) -> tuple[StressAssignment, float]:
        """Multi-stack beam search for the best assignment under one template.

        Hypotheses are grouped by how many ictuses they stress, capped at the
        coverage requirement, and each group keeps the ``beam_width`` cheapest
        prefixes. Defect cost is additive per word, so the best prefix of a
        group always extends to the best line of that group.
        """
        if self.total_syllables == 0:
            raise EmptyLineError("cannot scan a line without syllables")
        width: int = beam_width if beam_width is not None else options.beam_width
        n_ictus: int = template.ictus_count(self.total_syllables)
        coverage_cap: int = math.ceil(options.stress_coverage_floor * n_ictus)

        stacks: dict[int, list[_Hypothesis]] = {0: [_Hypothesis(0.0, 0, 0, (), ())]}
        for segment_steps in self._steps(template, options):
            expanded: dict[int, list[_Hypothesis]] = defaultdict(list)
            for hypotheses in stacks.values():
                for hypothesis in hypotheses:
                    for choice, step in enumerate(segment_steps):
                        cost: float = hypothesis.cost
                        for item in step.costs:
                            cost += item
                        hits: int = hypothesis.hits + step.hits
                        expanded[min(hits, coverage_cap)].append(
                            _Hypothesis(
                                cost,
                                hits,
                                hypothesis.function_stresses + step.function_stresses,
                                hypothesis.pattern + step.pattern,
                                hypothesis.choices + (choice,),
                            )
                        )
            stacks = {key: heapq.nsmallest(width, group, key=_Hypothesis.rank) for key, group in expanded.items()}

        finals: list[_Hypothesis] = [hypothesis for group in stacks.values() for hypothesis in group]
        best: _Hypothesis = min(finals, key=lambda item: self._final_key(item, n_ictus, options))
        return self._assemble(best.choices), _finalize(best.cost, best.hits, n_ictus, options)

    def exhaustive(self, template: MeterTemplate, options: ScanOptions) -> tuple[StressAssignment, float]:
        """Enumerate every combination of variants; the reference the beam is checked against."""
        if self.total_syllables == 0:
            raise EmptyLineError("cannot scan a line without syllables")
        product: int = self.variant_product
        if product > options.brute_force_cap:
            raise VariantCapError(f"{product} variant combinations exceed the cap of {options.brute_force_cap}")
        n_ictus: int = template.ictus_count(self.total_syllables)
        steps: list[list[_Step]] = self._steps(template, options)

        best: _Hypothesis | None = None
        best_key: tuple[float, int, tuple[int, ...]] | None = None
        for combination in itertools.product(*(range(len(segment_steps)) for segment_steps in steps)):
            cost: float = 0.0
            hits: int = 0
            function_stresses: int = 0
            pattern: tuple[int, ...] = ()
            for segment_steps, choice in zip(steps, combination):
                step: _Step = segment_steps[choice]
                for item in step.costs:
                    cost += item
                hits += step.hits
                function_stresses += step.function_stresses
                pattern += step.pattern
            candidate: _Hypothesis = _Hypothesis(cost, hits, function_stresses, pattern, tuple(combination))
            key: tuple[float, int, tuple[int, ...]] = self._final_key(candidate, n_ictus, options)
            if best_key is None or key < best_key:
                best, best_key = candidate, key
        assert best is not None
        return self._assemble(best.choices), _finalize(best.cost, best.hits, n_ictus, options)

    def _final_key(
        self, hypothesis: _Hypothesis, n_ictus: int, options: ScanOptions
    ) -> tuple[float, int, tuple[int, ...]]:
        return (
            -_finalize(hypothesis.cost, hypothesis.hits, n_ictus, options),
            hypothesis.function_stresses,
            hypothesis.pattern,
        )

    def _assemble(self, choices: tuple[int, ...]) -> StressAssignment:
        chosen: list[WordVariant | None] = [None] * len(self.words)
        stressed: list[bool] = [False] * self.total_syllables
        for segment, choice in zip(self.segments, choices):
            for variant in segment.realizations[choice]:
                chosen[variant.token_index] = variant
                if variant.stress is not None:
                    stressed[self.syllable_map.spans[variant.token_index][0] + variant.stress - 1] = True
        return StressAssignment(
            syllable_map=self.syllable_map,
            stressed=tuple(stressed),
            chosen=tuple(chosen),
            admissible=self.admissible,
        )


# Scoring


def _word_defects(
    start: int,
    end: int,
    variant: WordVariant,
    admissible: frozenset[int],
    template: MeterTemplate,
) -> LineDefects:
    polysyllabic: bool = end - start > 1
    off_ictus: int = 0
    off_ictus_mono: int = 0
    hits: int = 0
    on_ictus: bool = False
    if variant.stress is not None:
        if template.is_ictus(start + variant.stress - 1):
            hits = 1
            on_ictus = True
        elif polysyllabic:
            off_ictus = 1
        else:
            off_ictus_mono = 1
    misses: int = 0
    if polysyllabic and not on_ictus:
        misses = sum(1 for position in admissible if template.is_ictus(start + position - 1))
    return LineDefects(
        off_ictus=off_ictus,
        off_ictus_mono=off_ictus_mono,
        avoidable_misses=misses,
        penalty=variant.base_penalty,
        stressed_ictuses=hits,
    )


def _defect_cost(defects: LineDefects, options: ScanOptions) -> float:
    return (
        defects.penalty
        + options.alpha * defects.off_ictus
        + options.gamma * defects.off_ictus_mono
        + options.beta * defects.avoidable_misses
    )


def _finalize(cost: float, hits: int, n_ictus: int, options: ScanOptions) -> float:
    score: float = min(1.0, max(0.0, 1.0 - cost / max(1, n_ictus)))
    required: float = options.stress_coverage_floor * n_ictus
    if hits < required:
        score *= hits / max(1.0, required)
    return score


def line_defects(assignment: StressAssignment, template: MeterTemplate) -> LineDefects:
    """Sum the per-word defects of an assignment under a template."""
    total: LineDefects = LineDefects(n_ictus=template.ictus_count(assignment.syllable_map.total_syllables))
    for index, variant in enumerate(assignment.chosen):
        if variant is None:
            continue
        start, end = assignment.syllable_map.spans[index]
        word: LineDefects = _word_defects(start, end, variant, assignment.admissible[index], template)
        total = dataclasses.replace(
            total,
            off_ictus=total.off_ictus + word.off_ictus,
            off_ictus_mono=total.off_ictus_mono + word.off_ictus_mono,
            avoidable_misses=total.avoidable_misses + word.avoidable_misses,
            penalty=total.penalty + word.penalty,
            stressed_ictuses=total.stressed_ictuses + word.stressed_ictuses,
        )
    return total


def line_score(assignment: StressAssignment, template: MeterTemplate, options: ScanOptions | None = None) -> float:
    """Technicality of one assignment under one template, in [0, 1].

    ``1 - cost / N_ictus`` clamped to [0, 1], where cost adds off-ictus
    stresses, avoidable ictus misses and variant penalties. A line that
    stresses fewer than ``stress_coverage_floor`` of its ictuses is scaled
    down proportionally.
    """
    active: ScanOptions = options if options is not None else ScanOptions()
    n_syllables: int = assignment.syllable_map.total_syllables
    if n_syllables == 0:
        raise EmptyLineError("cannot score a line without syllables")
    cost: float = 0.0
    hits: int = 0
    for index, variant in enumerate(assignment.chosen):
        if variant is None:
            continue
        start, end = assignment.syllable_map.spans[index]
        word: LineDefects = _word_defects(start, end, variant, assignment.admissible[index], template)
        cost += _defect_cost(word, active)
        hits += word.stressed_ictuses
    return _finalize(cost, hits, template.ictus_count(n_syllables), active)


# Line and poem entry points


def beam_scan_line(
    tokens: Sequence[str],
    lex: Lexicon,
    template: MeterTemplate,
    options: ScanOptions | None = None,
    *,
    beam_width: int | None = None,
) -> tuple[StressAssignment, float]:
    """Best stress assignment for a line under one template, found by beam search."""
    active: ScanOptions = options if options is not None else ScanOptions()
    return LineLattice(tokens, lex, active).search(template, active, beam_width=beam_width)


def brute_scan_line(
    tokens: Sequence[str],
    lex: Lexicon,
    template: MeterTemplate,
    options: ScanOptions | None = None,
) -> tuple[StressAssignment, float]:
    """Exhaustive counterpart of beam_scan_line; raises VariantCapError past the cap."""
    active: ScanOptions = options if options is not None else ScanOptions()
    return LineLattice(tokens, lex, active).exhaustive(template, active)


def detect_meter(
    lines: Sequence[Sequence[str | Token]],
    lex: Lexicon,
    options: ScanOptions | None = None,
) -> tuple[MeterTemplate | None, list[LineScansion]]:
    """Pick the template with the highest mean line score; None means 'other'.

    Lines without syllables are left out of the result.
    """
    active: ScanOptions = options if options is not None else ScanOptions()
    prepared: list[tuple[tuple[Token, ...], LineLattice]] = []
    for line in lines:
        tokens: tuple[Token, ...] = _as_tokens(line)
        lattice: LineLattice = LineLattice([token.text for token in tokens], lex, active)
        if lattice.total_syllables:
            prepared.append((tokens, lattice))
    if not prepared:
        raise EmptyPoemError("no line has any syllables to scan")

    results: dict[MeterName, list[tuple[StressAssignment, float]]] = {
        template.name: [lattice.search(template, active) for _, lattice in prepared] for template in TEMPLATES
    }
    means: dict[MeterName, float] = {
        name: math.fsum(score for _, score in scored) / len(scored) for name, scored in results.items()
    }
    best: MeterTemplate = TEMPLATES[0]
    for template in TEMPLATES[1:]:
        if means[template.name] > means[best.name]:
            best = template
    poem_meter: MeterTemplate | None = best if means[best.name] >= active.meter_floor else None

    scansions: list[LineScansion] = []
    for index, (tokens, lattice) in enumerate(prepared):
        scores: dict[MeterName, float] = {template.name: results[template.name][index][1] for template in TEMPLATES}
        chosen: MeterTemplate = poem_meter if poem_meter is not None else _best_template(scores)
        assignment, score = results[chosen.name][index]
        scansions.append(_line_scansion(tokens, assignment, chosen, score, scores, active))
    return poem_meter, scansions


def scan_line(line: str, lex: Lexicon, options: ScanOptions | None = None) -> LineScansion:
    """Scan a single line on its own, choosing its best template."""
    active: ScanOptions = options if options is not None else ScanOptions()
    tokens: tuple[Token, ...] = tuple(tokenize_line(line))
    lattice: LineLattice = LineLattice([token.text for token in tokens], lex, active)
    results: dict[MeterName, tuple[StressAssignment, float]] = {
        template.name: lattice.search(template, active) for template in TEMPLATES
    }
    scores: dict[MeterName, float] = {name: score for name, (_, score) in results.items()}
    chosen: MeterTemplate = _best_template(scores)
    assignment, score = results[chosen.name]
    return _line_scansion(tokens, assignment, chosen, score, scores, active)


def scan_poem(text: str, lex: Lexicon, options: ScanOptions | None = None) -> PoemScansion:
    """Tokenize, scan and mark up a poem. The rhyme scheme is left empty."""
    active: ScanOptions = options if options is not None else ScanOptions()
    if not text.strip():
        raise EmptyPoemError("poem text is empty")
    token_lines: list[list[Token]] = [tokenize_line(line) for line in text.splitlines() if line.strip()]
    poem_meter, lines = detect_meter(token_lines, lex, active)
    technicality: float = math.fsum(line.technicality for line in lines) / len(lines)
    return PoemScansion(lines=tuple(lines), poem_meter=poem_meter, poem_technicality=technicality)


def analyze_poem(text: str, lex: Lexicon, options: ScanOptions | None = None) -> PoemScansion:
    """Scan a poem and fill in its rhyme scheme."""
    active: ScanOptions = options if options is not None else ScanOptions()
    poem: PoemScansion = scan_poem(text, lex, active)
    return dataclasses.replace(poem, rhyme_scheme=detect_scheme(poem, active))


def _best_template(scores: dict[MeterName, float]) -> MeterTemplate:
    best: MeterTemplate = TEMPLATES[0]
    for template in TEMPLATES[1:]:
        if scores[template.name] > scores[best.name]:
            best = template
    return best


def _as_tokens(line: Sequence[str | Token]) -> tuple[Token, ...]:
    tokens: list[Token] = []
    for index, item in enumerate(line):
        if isinstance(item, Token):
            tokens.append(item)
        else:
            tokens.append(Token(item, " " if index < len(line) - 1 else ""))
    return tuple(tokens)


def _line_scansion(
    tokens: tuple[Token, ...],
    assignment: StressAssignment,
    template: MeterTemplate,
    score: float,
    scores: dict[MeterName, float],
    options: ScanOptions,
) -> LineScansion:
    return LineScansion(
        text="".join(token.text + token.space_after for token in tokens),
        tokens=tokens,
        assignment=assignment,
        meter=template,
        technicality=score,
        marked_text=emit_markup(tokens, assignment),
        low_confidence=assignment.syllable_map.total_syllables < options.min_syllables_confident,
        defects=line_defects(assignment, template),
        template_scores=scores,
    )
