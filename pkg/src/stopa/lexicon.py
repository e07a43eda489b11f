"""Accent dictionary, closed-class words, collocation rules and OOV stress prediction."""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from stopa.config import DEFAULT_LEXICON_PATH, DEFAULT_PARADIGMS_PATH, LexiconConfig
from stopa.errors import LexiconLoadError, MalformedRecordError, NoVowelError, StopaError
from stopa.paradigms import LemmaRecord, parse_lemma_row
from stopa.phonetics import count_syllables

logger: logging.Logger = logging.getLogger(__name__)

STEM_RULE: str = "stem"


class AccentEntry(BaseModel):
    """One word form with every stress position the dictionary admits."""

    model_config = ConfigDict(frozen=True)

    surface: str
    n_syllables: int = Field(ge=0)
    stress_positions: tuple[int, ...] = Field(min_length=1)
    is_function_word: bool = False
    pos_hint: str | None = None

    @model_validator(mode="after")
    def _check_positions(self) -> AccentEntry:
        if self.n_syllables != count_syllables(self.surface):
            raise ValueError(f"{self.surface!r} has {count_syllables(self.surface)} vowels, not {self.n_syllables}")
        if any(not 1 <= position <= self.n_syllables for position in self.stress_positions):
            raise ValueError(f"stress positions {list(self.stress_positions)} outside 1..{self.n_syllables}")
        if "ё" in self.surface:
            yo_syllable: int = count_syllables(self.surface[: self.surface.index("ё")]) + 1
            if yo_syllable not in self.stress_positions:
                raise ValueError(f"{self.surface!r} must be stressed on its ё syllable {yo_syllable}")
        return self


class CollocationRule(BaseModel):
    """A short phrase that carries a single stress, often shifted onto a preposition."""

    model_config = ConfigDict(frozen=True)

    pattern: tuple[str, ...] = Field(min_length=2, max_length=3)
    stressed_index: int = Field(ge=1, description="1-based word carrying the stress")
    stress_position: int = Field(ge=1, description="1-based syllable within that word")

    @model_validator(mode="after")
    def _check_target(self) -> CollocationRule:
        if self.stressed_index > len(self.pattern):
            raise ValueError(f"stressed word {self.stressed_index} is outside a {len(self.pattern)}-word pattern")
        target: str = self.pattern[self.stressed_index - 1]
        if not 1 <= self.stress_position <= count_syllables(target):
            raise ValueError(f"syllable {self.stress_position} does not exist in {target!r}")
        return self


@dataclass(frozen=True, slots=True)
class PrefixRule:
    """OOV rule for a productive prefix: keep the stem stress or stress a fixed prefix syllable."""

    prefix: str
    rule: str | int

    def apply(self, word: str, entries: dict[str, AccentEntry]) -> list[int] | None:
        if not word.startswith(self.prefix) or len(word) <= len(self.prefix):
            return None
        stem_entry: AccentEntry | None = entries.get(word[len(self.prefix) :])
        if stem_entry is None:
            return None
        if self.rule == STEM_RULE:
            offset: int = count_syllables(self.prefix)
            return [offset + position for position in stem_entry.stress_positions]
        return [int(self.rule)]


@dataclass(slots=True)
class LoadReport:
    """Outcome of reading one line-oriented resource."""

    records_read: int = 0
    errors: list[StopaError] = field(default_factory=list)

    @property
    def malformed(self) -> int:
        return len(self.errors)

    def extend(self, other: LoadReport) -> None:
        self.records_read += other.records_read
        self.errors.extend(other.errors)


@dataclass(frozen=True, slots=True)
class Lexicon:
    """Read-only container for the lexical resources used by scansion."""

    entries: dict[str, AccentEntry]
    collocations: dict[str, tuple[CollocationRule, ...]]
    function_words: frozenset[str]
    prefix_rules: tuple[PrefixRule, ...] = ()
    report: LoadReport = field(default_factory=LoadReport)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: object) -> bool:
        return isinstance(word, str) and word.lower() in self.entries

    def __iter__(self) -> Iterator[AccentEntry]:
        return iter(self.entries.values())

    @property
    def size(self) -> int:
        return len(self.entries)

    def lookup(self, word: str) -> AccentEntry | None:
        """Return the entry for the lowercased word, or None when it is unknown."""
        return self.entries.get(word.lower())

    def is_function_word(self, word: str) -> bool:
        return word.lower() in self.function_words

    def match_collocation(self, tokens: Sequence[str], start: int) -> tuple[CollocationRule, int] | None:
        """Longest collocation whose pattern equals ``tokens[start:]``, case-insensitively."""
        candidates: tuple[CollocationRule, ...] = self.collocations.get(tokens[start].lower(), ())
        for rule in candidates:
            width: int = len(rule.pattern)
            window: tuple[str, ...] = tuple(token.lower() for token in tokens[start : start + width])
            if window == rule.pattern:
                return rule, width
        return None

    def predict_oov_stress(self, word: str) -> list[int]:
        """Candidate stress positions for an unknown word, most likely first.

        ё wins outright. Otherwise productive prefixes over a known stem are
        tried, longest first. The fallback prefers the penultimate syllable and
        then every other syllable by distance from it, earlier first on ties.
        """
        lowered: str = word.lower()
        n_syllables: int = count_syllables(lowered)
        if n_syllables == 0:
            raise NoVowelError(f"{word!r} has no vowels to stress")
        if "ё" in lowered:
            return [count_syllables(lowered[: lowered.index("ё")]) + 1]
        if n_syllables == 1:
            return [1]
        for prefix_rule in self.prefix_rules:
            candidates: list[int] | None = prefix_rule.apply(lowered, self.entries)
            if candidates:
                return candidates
        penult: int = n_syllables - 1
        return sorted(range(1, n_syllables + 1), key=lambda position: (abs(position - penult), position))

    def resolve_hyphenated(self, word: str) -> AccentEntry | None:
        """Entry for a hyphenated compound, built from its parts when the whole is unknown.

        Content parts contribute their stresses; a compound made only of
        closed-class parts behaves as a function word. Any unknown part makes
        the compound unknown.
        """
        whole: AccentEntry | None = self.lookup(word)
        if whole is not None or "-" not in word:
            return whole
        offset: int = 0
        content: list[int] = []
        closed: list[int] = []
        for part in word.lower().split("-"):
            width: int = count_syllables(part)
            if width:
                entry: AccentEntry | None = self.lookup(part)
                if entry is None and not self.is_function_word(part):
                    return None
                positions: tuple[int, ...] = entry.stress_positions if entry is not None else (1,)
                target: list[int] = closed if self.is_function_word(part) else content
                target.extend(offset + position for position in positions)
            offset += width
        positions_all: list[int] = content or closed
        if not positions_all:
            return None
        return AccentEntry(
            surface=word.lower(),
            n_syllables=offset,
            stress_positions=tuple(sorted(set(positions_all))),
            is_function_word=not content,
        )


def load_lexicon(dictionary_path: str | Path | None = None, config: LexiconConfig | None = None) -> Lexicon:
    """Load the accent dictionary plus its auxiliary tables.

    The shipped dictionary is extended with forms generated from the paradigm
    table; a user dictionary is used alone unless ``config.paradigms_path`` is
    set. Listed entries always win over generated forms. Malformed records are
    collected into ``Lexicon.report`` and skipped; with ``config.strict`` the
    first one is raised instead.
    """
    active_config: LexiconConfig = config if config is not None else LexiconConfig()
    path: Path = Path(dictionary_path) if dictionary_path is not None else DEFAULT_LEXICON_PATH
    report: LoadReport = LoadReport()

    entries: dict[str, AccentEntry] = {}
    for line_number, fields in _read_tsv(path):
        report.records_read += 1
        try:
            entry: AccentEntry = _parse_entry(fields)
        except (ValueError, ValidationError) as exc:
            _record_error(report, MalformedRecordError(path, line_number, _reason(exc)), active_config.strict)
            continue
        entries[entry.surface] = _merge(entries.get(entry.surface), entry)

    function_words: set[str] = set(load_function_words(active_config.function_words_path))
    function_words.update(surface for surface, entry in entries.items() if entry.is_function_word)
    for surface in function_words & entries.keys():
        if not entries[surface].is_function_word:
            entries[surface] = entries[surface].model_copy(update={"is_function_word": True})

    paradigms_path: Path | None = active_config.paradigms_path
    if paradigms_path is None and dictionary_path is None:
        paradigms_path = DEFAULT_PARADIGMS_PATH
    generated_count: int = 0
    if paradigms_path is not None:
        generated, paradigm_report = load_paradigm_forms(paradigms_path, strict=active_config.strict)
        report.extend(paradigm_report)
        for surface, entry in generated.items():
            if surface not in entries and surface not in function_words:
                entries[surface] = entry
                generated_count += 1

    collocations, collocation_report = load_collocations(active_config.collocations_path, strict=active_config.strict)
    prefix_rules, prefix_report = load_prefix_rules(active_config.prefix_rules_path, strict=active_config.strict)
    report.extend(collocation_report)
    report.extend(prefix_report)

    logger.info(
        "Loaded lexicon %s: %d entries (%d generated), %d function words, %d collocations, %d prefix rules, "
        "%d malformed records",
        path,
        len(entries),
        generated_count,
        len(function_words),
        sum(len(rules) for rules in collocations.values()),
        len(prefix_rules),
        report.malformed,
    )
    return Lexicon(
        entries=entries,
        collocations=collocations,
        function_words=frozenset(function_words),
        prefix_rules=prefix_rules,
        report=report,
    )


def load_function_words(path: str | Path) -> list[str]:
    """One surface per line; blank lines and '#' comments are ignored."""
    return [fields[0].strip().lower() for _, fields in _read_tsv(Path(path)) if fields[0].strip()]


def load_paradigm_forms(path: str | Path, *, strict: bool = False) -> tuple[dict[str, AccentEntry], LoadReport]:
    """Expand ``CLASS<TAB>lemma[<TAB>+ся]`` rows into entries; generated homographs keep every stress."""
    report: LoadReport = LoadReport()
    generated: dict[str, AccentEntry] = {}
    for line_number, fields in _read_tsv(Path(path)):
        report.records_read += 1
        try:
            record: LemmaRecord = parse_lemma_row(fields)
            forms: list[AccentEntry] = [
                AccentEntry(surface=surface, n_syllables=count_syllables(surface), stress_positions=(stress,))
                for surface, stress in record.expand()
            ]
        except (ValueError, ValidationError) as exc:
            _record_error(report, MalformedRecordError(path, line_number, _reason(exc)), strict)
            continue
        for entry in forms:
            generated[entry.surface] = _merge(generated.get(entry.surface), entry)
    return generated, report


def load_collocations(
    path: str | Path, *, strict: bool = False
) -> tuple[dict[str, tuple[CollocationRule, ...]], LoadReport]:
    """Read ``word1 word2 [word3]<TAB>stressed_index<TAB>stress_position`` records."""
    report: LoadReport = LoadReport()
    grouped: dict[str, list[CollocationRule]] = {}
    for line_number, fields in _read_tsv(Path(path)):
        report.records_read += 1
        try:
            if len(fields) != 3:
                raise ValueError(f"expected 3 tab-separated fields, got {len(fields)}")
            rule: CollocationRule = CollocationRule(
                pattern=tuple(fields[0].lower().split()),
                stressed_index=int(fields[1]),
                stress_position=int(fields[2]),
            )
        except (ValueError, ValidationError) as exc:
            _record_error(report, MalformedRecordError(path, line_number, _reason(exc)), strict)
            continue
        grouped.setdefault(rule.pattern[0], []).append(rule)
    indexed: dict[str, tuple[CollocationRule, ...]] = {
        first: tuple(sorted(rules, key=lambda rule: -len(rule.pattern))) for first, rules in grouped.items()
    }
    return indexed, report


def load_prefix_rules(path: str | Path, *, strict: bool = False) -> tuple[tuple[PrefixRule, ...], LoadReport]:
    """Read ``prefix<TAB>rule`` records where rule is ``stem`` or a 1-based prefix syllable."""
    report: LoadReport = LoadReport()
    rules: list[PrefixRule] = []
    for line_number, fields in _read_tsv(Path(path)):
        report.records_read += 1
        try:
            if len(fields) != 2:
                raise ValueError(f"expected 2 tab-separated fields, got {len(fields)}")
            prefix: str = fields[0].strip().lower()
            raw_rule: str = fields[1].strip()
            rule: str | int = STEM_RULE if raw_rule == STEM_RULE else int(raw_rule)
            if isinstance(rule, int) and not 1 <= rule <= count_syllables(prefix):
                raise ValueError(f"prefix {prefix!r} has no syllable {rule}")
        except ValueError as exc:
            _record_error(report, MalformedRecordError(path, line_number, str(exc)), strict)
            continue
        rules.append(PrefixRule(prefix=prefix, rule=rule))
    rules.sort(key=lambda item: -len(item.prefix))
    return tuple(rules), report


def _read_tsv(path: Path) -> Iterator[tuple[int, list[str]]]:
    try:
        text: str = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise LexiconLoadError(f"cannot read lexical resource {path}: {exc}") from exc
    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line: str = raw_line.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield line_number, line.split("\t")


def _parse_entry(fields: list[str]) -> AccentEntry:
    if len(fields) < 3:
        raise ValueError(f"expected at least 3 tab-separated fields, got {len(fields)}")
    flags: list[str] = [flag.strip() for flag in fields[3].split(",")] if len(fields) > 3 else []
    pos_hint: str | None = None
    for flag in flags:
        if flag.startswith("pos:"):
            pos_hint = flag.removeprefix("pos:")
    positions: tuple[int, ...] = tuple(sorted({int(item) for item in fields[2].split(",") if item.strip()}))
    return AccentEntry(
        surface=fields[0].strip().lower(),
        n_syllables=int(fields[1]),
        stress_positions=positions,
        is_function_word="fn" in flags,
        pos_hint=pos_hint,
    )


def _merge(existing: AccentEntry | None, incoming: AccentEntry) -> AccentEntry:
    if existing is None:
        return incoming
    return existing.model_copy(
        update={
            "stress_positions": tuple(sorted(set(existing.stress_positions) | set(incoming.stress_positions))),
            "is_function_word": existing.is_function_word or incoming.is_function_word,
            "pos_hint": existing.pos_hint or incoming.pos_hint,
        }
    )


def _record_error(report: LoadReport, error: StopaError, strict: bool) -> None:
    if strict:
        raise error
    logger.warning("Skipping malformed record %s", error)
    report.errors.append(error)


def _reason(exc: Exception) -> str:
    if isinstance(exc, ValidationError):
        return "; ".join(str(item["msg"]) for item in exc.errors())
    return str(exc)
