"""Fuzzy rhyme scoring between line endings and rhyme-scheme induction."""

from __future__ import annotations

import string
import unicodedata
from collections.abc import Sequence
from typing import TYPE_CHECKING

import numpy as np

from stopa.config import ScanOptions
from stopa.phonetics import VOICED_TO_VOICELESS, PhoneSeq, clausula

if TYPE_CHECKING:
    from stopa.scansion import LineScansion, PoemScansion

UNRHYMED: str = "-"
# A-Z, then the remaining uppercase letters of the Basic Multilingual Plane in code point order.
SCHEME_LETTERS: str = string.ascii_uppercase + "".join(
    chr(code) for code in range(0x80, 0x10000) if unicodedata.category(chr(code)) == "Lu"
)

NEAR_SUBSTITUTION_COST: float = 0.25
FAR_SUBSTITUTION_COST: float = 1.0
INDEL_COST: float = 1.0

_VOWEL_CLASSES: tuple[frozenset[str], ...] = (frozenset({"a", "o"}), frozenset({"i", "e", "ɨ"}))
_VOICING_PAIRS: frozenset[frozenset[str]] = frozenset(
    frozenset({voiced, voiceless}) for voiced, voiceless in VOICED_TO_VOICELESS.items()
)
# Stressed ы after ж/ш/ц is the same vowel as и, so "жи" still rhymes with "ри".
_STRESSED_VOWEL_KEY: dict[str, str] = {"ɨ": "i"}

# A rhyme scheme is a string of uppercase letters and '-', one character per line.
RhymeScheme = str


def substitution_cost(left: str, right: str) -> float:
    """0 for equal phones, 0.25 within a phone class, 1.0 otherwise.

    Classes: hard/soft pairs, voiced/voiceless pairs, and the reduced-vowel
    groups {a, o} and {i, e, ɨ}.
    """
    if left == right:
        return 0.0
    left_base: str = left.rstrip("'")
    right_base: str = right.rstrip("'")
    if left_base == right_base:
        return NEAR_SUBSTITUTION_COST
    if frozenset({left_base, right_base}) in _VOICING_PAIRS:
        return NEAR_SUBSTITUTION_COST
    if any(left in group and right in group for group in _VOWEL_CLASSES):
        return NEAR_SUBSTITUTION_COST
    return FAR_SUBSTITUTION_COST


def weighted_edit_distance(left: Sequence[str], right: Sequence[str]) -> float:
    """Levenshtein distance with class-aware substitution costs."""
    previous: list[float] = [INDEL_COST * index for index in range(len(right) + 1)]
    for row, left_phone in enumerate(left, start=1):
        current: list[float] = [INDEL_COST * row]
        for column, right_phone in enumerate(right, start=1):
            current.append(
                min(
                    previous[column] + INDEL_COST,
                    current[column - 1] + INDEL_COST,
                    previous[column - 1] + substitution_cost(left_phone, right_phone),
                )
            )
        previous = current
    return previous[-1]


def rhyme_score(a: PhoneSeq, b: PhoneSeq) -> float:
    """Similarity of two clausulae in [0, 1]; a different stressed vowel scores 0."""
    if not a.phones or not b.phones:
        raise ValueError("rhyme_score needs two non-empty clausulae")
    if a.phones == b.phones:
        return 1.0
    if _STRESSED_VOWEL_KEY.get(a.phones[0], a.phones[0]) != _STRESSED_VOWEL_KEY.get(b.phones[0], b.phones[0]):
        return 0.0
    distance: float = weighted_edit_distance(a.phones, b.phones)
    return max(0.0, 1.0 - distance / max(len(a.phones), len(b.phones)))


def clausula_for_line(line: LineScansion) -> PhoneSeq:
    return clausula([token.text for token in line.tokens], line.assignment)


def rhyme_matrix(clausulae: Sequence[PhoneSeq], max_distance: int) -> np.ndarray:
    """Pairwise rhyme scores for lines at most ``max_distance`` apart; other cells stay 0."""
    size: int = len(clausulae)
    matrix: np.ndarray = np.eye(size, dtype=float)
    for first in range(size):
        for second in range(first + 1, min(size, first + max_distance + 1)):
            score: float = rhyme_score(clausulae[first], clausulae[second])
            matrix[first, second] = score
            matrix[second, first] = score
    return matrix


def scheme_from_matrix(matrix: np.ndarray, threshold: float, max_distance: int) -> RhymeScheme:
    """Label connected components of the rhyme relation by first appearance.

    Chains join classes: if a rhymes with b and b with c, all three share a
    letter even when a and c fall below the threshold.
    """
    size: int = matrix.shape[0]
    parent: list[int] = list(range(size))

    def find(node: int) -> int:
        while parent[node] != node:
            parent[node] = parent[parent[node]]
            node = parent[node]
        return node

    for first in range(size):
        for second in range(first + 1, min(size, first + max_distance + 1)):
            if matrix[first, second] >= threshold:
                root_first, root_second = find(first), find(second)
                if root_first != root_second:
                    parent[max(root_first, root_second)] = min(root_first, root_second)

    roots: list[int] = [find(node) for node in range(size)]
    component_sizes: dict[int, int] = {}
    for root in roots:
        component_sizes[root] = component_sizes.get(root, 0) + 1
    letters: dict[int, str] = {}
    labels: list[str] = []
    for root in roots:
        if component_sizes[root] < 2:
            labels.append(UNRHYMED)
            continue
        if root not in letters:
            if len(letters) == len(SCHEME_LETTERS):
                raise ValueError(f"more than {len(SCHEME_LETTERS)} rhyme classes cannot be labelled")
            letters[root] = SCHEME_LETTERS[len(letters)]
        labels.append(letters[root])
    return "".join(labels)


def detect_scheme(scansion: PoemScansion, options: ScanOptions | None = None) -> RhymeScheme:
    """Rhyme scheme of a scanned poem, e.g. ``ABAB`` or ``-A-A``."""
    active: ScanOptions = options if options is not None else ScanOptions()
    if not scansion.lines:
        raise ValueError("cannot detect the rhyme scheme of a poem without lines")
    clausulae: list[PhoneSeq] = [clausula_for_line(line) for line in scansion.lines]
    matrix: np.ndarray = rhyme_matrix(clausulae, active.max_rhyme_distance)
    return scheme_from_matrix(matrix, active.rhyme_threshold, active.max_rhyme_distance)

