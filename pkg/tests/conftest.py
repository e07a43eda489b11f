"""Shared fixtures for stopa tests."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import pytest

from stopa.config import ScanOptions
from stopa.lexicon import Lexicon, load_lexicon

FIXTURE_DIR: Path = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture(scope="session")
def lexicon() -> Lexicon:
    """The shipped lexicon with its paradigm forms, loaded once per session."""
    return load_lexicon()


@pytest.fixture
def options() -> ScanOptions:
    return ScanOptions()


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def canonical_poems() -> list[dict[str, Any]]:
    """Canonical quatrains with their known meter and rhyme scheme."""
    path: Path = FIXTURE_DIR / "canonical.jsonl"
    return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]


@pytest.fixture(scope="session")
def canonical_by_id(canonical_poems: list[dict[str, Any]]) -> dict[str, dict[str, Any]]:
    return {poem["id"]: poem for poem in canonical_poems}


@pytest.fixture(scope="session")
def corpus_path() -> Path:
    return FIXTURE_DIR / "corpus.jsonl"


@pytest.fixture(scope="session")
def control_text() -> str:
    """Poems built from disyllables whose stresses fit no meter well."""
    return (FIXTURE_DIR / "control.txt").read_text(encoding="utf-8")
