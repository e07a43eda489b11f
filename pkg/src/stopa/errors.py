"""Exception hierarchy for the scansion engine."""

from __future__ import annotations

from pathlib import Path


class StopaError(Exception):
    """Base class for every error raised by the library."""


class LexiconLoadError(StopaError):
    """A lexical resource could not be opened or decoded."""


class MalformedRecordError(StopaError):
    """One record of a line-oriented input file could not be parsed."""

    def __init__(self, source: str | Path, line_number: int, reason: str) -> None:
        self.source: str = str(source)
        self.line_number: int = line_number
        self.reason: str = reason
        super().__init__(f"{self.source}:{line_number}: {reason}")


class NoVowelError(StopaError, ValueError):
    """A stress query was made for a word without vowel letters."""


class StressRangeError(StopaError, ValueError):
    """A stress position lies outside the word's syllables."""


class EmptyLineError(StopaError):
    """A line has no syllables to scan."""


class EmptyPoemError(StopaError):
    """A poem has no scannable lines."""


class VariantCapError(StopaError):
    """Exhaustive enumeration would exceed the configured variant cap."""


class RifmaValidationError(StopaError):
    """A RIFMA record parsed as JSON but violates the fragment invariants."""

    def __init__(self, line_number: int, reason: str) -> None:
        self.line_number: int = line_number
        self.reason: str = reason
        super().__init__(f"record {line_number}: {reason}")


class DegenerateInputError(StopaError, ValueError):
    """Statistics inputs are too short or have zero variance."""


class LengthMismatchError(StopaError, ValueError):
    """Paired statistics inputs have different lengths."""
