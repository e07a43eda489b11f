"""Tests for option loading and the lexicon configuration."""

from __future__ import annotations

from pathlib import Path

import pytest
from pydantic import ValidationError

from stopa.config import DEFAULT_LEXICON_PATH, GOLDEN_RIFMA_PATH, ConfigError, LexiconConfig, ScanOptions, load_options


class TestScanOptions:
    def test_defaults(self):
        """Shipped defaults of the search, scoring and rhyme stages."""
        options: ScanOptions = ScanOptions()
        assert options.beam_width == 16
        assert (options.alpha, options.gamma, options.beta) == (1.0, 0.5, 1.0)
        assert options.meter_floor == 0.5
        assert options.max_rhyme_distance == 4
        assert options.rhyme_threshold == 0.75
        assert options.variant_penalty_cutoff is None

    def test_options_are_frozen_and_closed(self):
        options: ScanOptions = ScanOptions()
        with pytest.raises(ValidationError):
            options.beam_width = 2  # type: ignore[misc]
        with pytest.raises(ValidationError):
            ScanOptions(beam_size=4)  # type: ignore[call-arg]

    def test_ranges_are_checked(self):
        with pytest.raises(ValidationError):
            ScanOptions(beam_width=0)
        with pytest.raises(ValidationError):
            ScanOptions(rhyme_threshold=1.5)

    def test_shipped_data_files_exist(self):
        assert DEFAULT_LEXICON_PATH.is_file()
        assert GOLDEN_RIFMA_PATH.is_file()
        assert LexiconConfig().collocations_path.is_file()


class TestLoadOptions:
    """TOML configuration files."""

    def test_no_file_gives_defaults(self):
        assert load_options() == ScanOptions()

    def test_flat_keys_and_tables(self, tmp_path: Path):
        path: Path = tmp_path / "stopa.toml"
        path.write_text("beam_width = 4\n\n[scan]\nalpha = 2.0\n\n[rhyme]\nmax_rhyme_distance = 2\n", encoding="utf-8")
        options: ScanOptions = load_options(path)
        assert options.beam_width == 4
        assert options.alpha == 2.0
        assert options.max_rhyme_distance == 2

    def test_overrides_win_over_the_file(self, tmp_path: Path):
        path: Path = tmp_path / "stopa.toml"
        path.write_text("beam_width = 4\n", encoding="utf-8")
        assert load_options(path, beam_width=8).beam_width == 8

    def test_unknown_key_is_a_config_error(self, tmp_path: Path):
        path: Path = tmp_path / "stopa.toml"
        path.write_text("[scan]\nbeam = 4\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="invalid scan options"):
            load_options(path)

    def test_bad_toml_and_missing_file(self, tmp_path: Path):
        path: Path = tmp_path / "stopa.toml"
        path.write_text("beam_width = \n", encoding="utf-8")
        with pytest.raises(ConfigError, match="invalid TOML"):
            load_options(path)
        with pytest.raises(ConfigError, match="cannot read"):
            load_options(tmp_path / "missing.toml")
