"""Syllable bookkeeping and a rule-based Russian phonetizer for rhyme comparison.

The phonetizer produces a broad transcription that is good enough to compare
line endings, not a full grapheme-to-phoneme model. The rule cascade is
documented in ``docs/phonetic_rules.md``.
"""

from __future__ import annotations

import re
from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

from stopa.errors import EmptyLineError, StressRangeError

if TYPE_CHECKING:
    from stopa.scansion import StressAssignment

VOWEL_LETTERS: frozenset[str] = frozenset("аеёиоуыэюя")
IOTATED_VOWELS: frozenset[str] = frozenset("еёюя")
SOFTENING_LETTERS: frozenset[str] = frozenset("еёиюяь")
STRESS_MARK: str = "́"

VOWEL_PHONES: frozenset[str] = frozenset({"a", "o", "u", "i", "ɨ", "e"})

_VOWEL_PHONE: dict[str, str] = {
    "а": "a",
    "о": "o",
    "у": "u",
    "ы": "ɨ",
    "э": "e",
    "и": "i",
    "е": "e",
    "ё": "o",
    "ю": "u",
    "я": "a",
}
_CONSONANT_PHONE: dict[str, str] = {
    "б": "b",
    "в": "v",
    "г": "g",
    "д": "d",
    "ж": "ž",
    "з": "z",
    "й": "j",
    "к": "k",
    "л": "l",
    "м": "m",
    "н": "n",
    "п": "p",
    "р": "r",
    "с": "s",
    "т": "t",
    "ф": "f",
    "х": "x",
    "ц": "c",
    "ч": "č",
    "ш": "š",
    "щ": "ŝ",
}
ALWAYS_HARD: frozenset[str] = frozenset("жшц")
# ч щ й are inherently soft, so they never take the palatalization mark.
ALWAYS_SOFT: frozenset[str] = frozenset("чщй")

VOICED_TO_VOICELESS: dict[str, str] = {"b": "p", "v": "f", "g": "k", "d": "t", "ž": "š", "z": "s"}
VOICELESS_TO_VOICED: dict[str, str] = {value: key for key, value in VOICED_TO_VOICELESS.items()}
UNPAIRED_VOICELESS: frozenset[str] = frozenset({"c", "č", "ŝ", "x"})

_CLUSTER_RULES: tuple[tuple[str, str], ...] = (
    ("вств", "ств"),
    ("лнц", "нц"),
    ("стн", "сн"),
    ("здн", "зн"),
    ("сч", "щ"),
    ("зч", "щ"),
    ("жч", "щ"),
)
_REFLEXIVE_ENDING = re.compile(r"ть?ся$")
_GENITIVE_EXCEPTIONS: frozenset[str] = frozenset(
    {"много", "немного", "строго", "нестрого", "дорого", "недорого", "убого", "полого", "отлого", "итого"}
)
_NON_LETTERS = re.compile(r"[^а-яё]")


@dataclass(frozen=True, slots=True)
class SyllableMap:
    """Global syllable coordinates for a tokenized line."""

    tokens: tuple[str, ...]
    spans: tuple[tuple[int, int], ...]
    total_syllables: int

    def token_at(self, syllable: int) -> int:
        """Index of the token that owns a global syllable index."""
        for index, (start, end) in enumerate(self.spans):
            if start <= syllable < end:
                return index
        raise IndexError(f"syllable {syllable} is outside the line")


@dataclass(frozen=True, slots=True)
class PhoneSeq:
    """Ordered phones plus the index of the stressed vowel, when there is one."""

    phones: tuple[str, ...]
    stress_index: int | None = None

    def __post_init__(self) -> None:
        if self.stress_index is not None and not is_vowel_phone(self.phones[self.stress_index]):
            raise ValueError(f"stress index {self.stress_index} does not point at a vowel phone")

    def __len__(self) -> int:
        return len(self.phones)


def is_vowel_phone(phone: str) -> bool:
    return phone in VOWEL_PHONES


def count_syllables(word: str) -> int:
    """Return the number of Cyrillic vowel letters in a word."""
    return sum(1 for char in word.lower() if char in VOWEL_LETTERS)


def vowel_char_indices(word: str) -> list[int]:
    """Character offsets of the vowel letters of a word, in order."""
    return [index for index, char in enumerate(word.lower()) if char in VOWEL_LETTERS]


def build_syllable_map(tokens: Sequence[str]) -> SyllableMap:
    """Assign each token a half-open range of global syllable indices, left to right."""
    spans: list[tuple[int, int]] = []
    cursor: int = 0
    for token in tokens:
        width: int = count_syllables(token)
        spans.append((cursor, cursor + width))
        cursor += width
    return SyllableMap(tokens=tuple(tokens), spans=tuple(spans), total_syllables=cursor)


def simplify_spelling(word: str) -> str:
    """Apply the orthographic simplifications that precede transcription.

    Unpronounced consonants in clusters are dropped, verbal ``-тся/-ться``
    becomes ``-ца`` and the genitive ``-ого/-его`` takes /v/. The number of
    vowel letters never changes.
    """
    simplified: str = _NON_LETTERS.sub("", word.lower())
    for source, target in _CLUSTER_RULES:
        simplified = simplified.replace(source, target)
    simplified = _REFLEXIVE_ENDING.sub("ца", simplified)
    if simplified.endswith(("ого", "его")) and simplified not in _GENITIVE_EXCEPTIONS:
        simplified = simplified[:-2] + "в" + simplified[-1]
    return simplified


def phonetize(word: str, stress_position: int | None = None) -> PhoneSeq:
    """Transcribe a word into broad phones, reducing unstressed vowels.

    ``stress_position`` is the 1-based stressed syllable or None for a fully
    reduced reading. A word spelled with ё is stressed on ё when no position
    is given.
    """
    n_syllables: int = count_syllables(word)
    if stress_position is not None and not 1 <= stress_position <= n_syllables:
        raise StressRangeError(f"stress position {stress_position} is outside 1..{n_syllables} for {word!r}")
    letters: str = simplify_spelling(word)
    if stress_position is None and "ё" in letters:
        stress_position = count_syllables(letters[: letters.index("ё")]) + 1

    phones: list[str] = []
    stress_index: int | None = None
    syllable: int = 0
    previous: str = ""
    for position, letter in enumerate(letters):
        following: str = letters[position + 1] if position + 1 < len(letters) else ""
        if letter in VOWEL_LETTERS:
            syllable += 1
            stressed: bool = syllable == stress_position
            after_hard: bool = previous in ALWAYS_HARD
            if letter in IOTATED_VOWELS and (not previous or previous in VOWEL_LETTERS or previous in "ьъ"):
                phones.append("j")
            elif letter == "и" and previous == "ь":
                phones.append("j")
            vowel: str = _reduce_vowel(letter, stressed=stressed, after_hard=after_hard)
            if stressed:
                stress_index = len(phones)
            phones.append(vowel)
        elif letter in _CONSONANT_PHONE:
            phone: str = _CONSONANT_PHONE[letter]
            if letter not in ALWAYS_HARD and letter not in ALWAYS_SOFT and following in SOFTENING_LETTERS:
                phone += "'"
            phones.append(phone)
        previous = letter

    phones = _devoice_final(phones)
    phones = _assimilate_voicing(phones)
    phones, stress_index = _collapse_doubles(phones, stress_index)
    return PhoneSeq(phones=tuple(phones), stress_index=stress_index)


def _reduce_vowel(letter: str, *, stressed: bool, after_hard: bool) -> str:
    vowel: str = _VOWEL_PHONE[letter]
    if letter == "и" and after_hard:
        vowel = "ɨ"
    if stressed:
        return vowel
    if letter == "о":
        return "a"
    if letter in "еяэ":
        return "ɨ" if after_hard else "i"
    return vowel


def _base(phone: str) -> str:
    return phone.rstrip("'")


def _soft_suffix(phone: str) -> str:
    return "'" if phone.endswith("'") else ""


def _devoice_final(phones: list[str]) -> list[str]:
    if phones and _base(phones[-1]) in VOICED_TO_VOICELESS:
        last: str = phones[-1]
        phones[-1] = VOICED_TO_VOICELESS[_base(last)] + _soft_suffix(last)
    return phones


def _assimilate_voicing(phones: list[str]) -> list[str]:
    # Right to left so that a whole cluster takes the voicing of its last member.
    for index in range(len(phones) - 2, -1, -1):
        base: str = _base(phones[index])
        trigger: str = _base(phones[index + 1])
        if trigger == "v":
            continue
        suffix: str = _soft_suffix(phones[index])
        if base in VOICED_TO_VOICELESS and (trigger in VOICELESS_TO_VOICED or trigger in UNPAIRED_VOICELESS):
            phones[index] = VOICED_TO_VOICELESS[base] + suffix
        elif base in VOICELESS_TO_VOICED and trigger in VOICED_TO_VOICELESS:
            phones[index] = VOICELESS_TO_VOICED[base] + suffix
    return phones


def _collapse_doubles(phones: list[str], stress_index: int | None) -> tuple[list[str], int | None]:
    collapsed: list[str] = []
    shifted: int | None = stress_index
    for index, phone in enumerate(phones):
        if collapsed and phone == collapsed[-1] and not is_vowel_phone(phone):
            if stress_index is not None and index < stress_index:
                shifted = (shifted or 0) - 1
            continue
        collapsed.append(phone)
    return collapsed, shifted


def render_phones(seq: PhoneSeq) -> str:
    """Readable transcription with the stressed vowel carrying an acute accent."""
    rendered: list[str] = [
        phone + STRESS_MARK if index == seq.stress_index else phone for index, phone in enumerate(seq.phones)
    ]
    return " ".join(rendered)


def clausula(line_tokens: Sequence[str], assignment: StressAssignment) -> PhoneSeq:
    """Phonetized line ending from the last stressed vowel to the end of the line.

    Words after the stressed one keep their own fully reduced transcription.
    A line without any stress falls back to its final syllable.
    """
    syllable_map: SyllableMap = assignment.syllable_map
    if syllable_map.total_syllables == 0:
        raise EmptyLineError("cannot take the clausula of a line without syllables")

    stressed_positions: list[int] = [index for index, flag in enumerate(assignment.stressed) if flag]
    if not stressed_positions:
        last_token: int = max(index for index, (start, end) in enumerate(syllable_map.spans) if end > start)
        tail: PhoneSeq = phonetize(line_tokens[last_token], None)
        vowel_indices: list[int] = [index for index, phone in enumerate(tail.phones) if is_vowel_phone(phone)]
        return PhoneSeq(phones=tail.phones[vowel_indices[-1] :], stress_index=None)

    last_stress: int = stressed_positions[-1]
    token_index: int = syllable_map.token_at(last_stress)
    start: int = syllable_map.spans[token_index][0]
    head: PhoneSeq = phonetize(line_tokens[token_index], last_stress - start + 1)
    phones: list[str] = list(head.phones[head.stress_index :])
    for later in range(token_index + 1, len(line_tokens)):
        if syllable_map.spans[later][1] > syllable_map.spans[later][0]:
            phones.extend(phonetize(line_tokens[later], None).phones)
    return PhoneSeq(phones=tuple(phones), stress_index=0)
