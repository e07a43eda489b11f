"""Tests for paradigm expansion and its merge into the lexicon."""

from __future__ import annotations

from pathlib import Path

import pytest

from stopa.config import LexiconConfig
from stopa.errors import MalformedRecordError
from stopa.lexicon import AccentEntry, Lexicon, load_lexicon, load_paradigm_forms
from stopa.paradigms import PARADIGMS, LemmaRecord, ending_stress, parse_lemma_row
from stopa.phonetics import STRESS_MARK
from stopa.scansion import PoemScansion, analyze_poem

WONDROUS_MOMENT: str = (
    "Я помню чудное мгновенье:\nПередо мной явилась ты,\nКак мимолётное виденье,\nКак гений чистой красоты."
)


def _forms(*fields: str) -> dict[str, int]:
    return dict(parse_lemma_row(list(fields)).expand())


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


class TestParseLemmaRow:
    def test_stem_stressed_lemma(self):
        record: LemmaRecord = parse_lemma_row(["ADJ", "бЕлый"])
        assert (record.stem, record.stress) == ("бел", 1)
        assert record.paradigm is PARADIGMS["ADJ"]
        assert (record.plain, record.reflexive) == (True, False)

    def test_ending_stressed_lemma(self):
        record: LemmaRecord = parse_lemma_row(["ADJ_END", "молодОй"])
        assert (record.stem, record.stress) == ("молод", 3)

    def test_reflexive_lemma_and_flag(self):
        only: LemmaRecord = parse_lemma_row(["V_AJ", "улыбАться"])
        assert (only.stem, only.plain, only.reflexive) == ("улыба", False, True)
        both: LemmaRecord = parse_lemma_row(["V_AJ", "встречАть", "+ся"])
        assert (both.plain, both.reflexive) == (True, True)

    @pytest.mark.parametrize(
        ("fields", "reason"),
        [
            (["ADJ"], "expected 2 or 3"),
            (["NOUN", "кнИга"], "unknown paradigm"),
            (["F_K", "книга"], "exactly one stressed vowel"),
            (["F_K", "КнИга"], "exactly one stressed vowel"),
            (["F_K", "Книга"], "exactly one stressed vowel"),
            (["ADJ", "кнИга"], "does not end in"),
            (["ADJ", "белЫй"], "keeps the stem stress"),
            (["ADJ_END", "мОлодой"], "stresses the ending"),
            (["ADJ", "бЕлый", "+ся"], "non-reflexive verb"),
            (["V_AJ", "улыбАться", "+ся"], "non-reflexive verb"),
            (["V_AJ", "читАть", "refl"], "unknown flag"),
        ],
    )
    def test_malformed_rows(self, fields: list[str], reason: str):
        with pytest.raises(ValueError, match=reason):
            parse_lemma_row(fields)

    def test_ending_stress_marks(self):
        assert ending_stress("ами") is None
        assert ending_stress("Ую") == 1
        assert ending_stress("овАвш") == 2


class TestExpand:
    """Forms and stresses produced by each kind of class."""

    def test_stem_stressed_noun(self):
        forms: dict[str, int] = _forms("F_K", "кнИга")
        assert forms == {
            "книга": 1,
            "книги": 1,
            "книге": 1,
            "книгу": 1,
            "книгой": 1,
            "книгам": 1,
            "книгами": 1,
            "книгах": 1,
        }

    def test_stress_moves_onto_stressed_endings(self):
        forms: dict[str, int] = _forms("V_OVA", "рисовАть")
        assert forms["рисовать"] == 3
        assert forms["рисую"] == 2
        assert forms["рисовали"] == 3
        assert forms["рисуйте"] == 2
        assert forms["рисующими"] == 2
        assert forms["рисовавший"] == 3

    def test_sibilant_stems_take_a_endings(self):
        forms: dict[str, int] = _forms("V_I_END_SH", "спешИть")
        assert forms["спешу"] == 2
        assert forms["спешат"] == 2
        assert forms["спешащий"] == 2
        assert forms["спешили"] == 2
        assert "спешят" not in forms

    def test_alternating_stems_skip_the_first_person(self):
        forms: dict[str, int] = _forms("V_I_END_M", "грустИть")
        assert forms["грустит"] == 2
        assert forms["грустящий"] == 2
        assert "грущу" not in forms
        assert "грустю" not in forms

    def test_reflexive_suffix_follows_the_final_letter(self):
        forms: dict[str, int] = _forms("V_AJ", "встречАть", "+ся")
        assert forms["встречаю"] == 2
        assert forms["встречаюсь"] == 2
        assert forms["встречаться"] == 2
        assert forms["встречались"] == 2
        assert forms["встречайтесь"] == 2
        assert forms["встречаясь"] == 2
        assert forms["встречающаяся"] == 2
        assert forms["встречавшееся"] == 2

    def test_reflexive_only_lemma_has_no_plain_forms(self):
        forms: dict[str, int] = _forms("V_AJ", "улыбАться")
        assert forms["улыбаюсь"] == 2
        assert forms["улыбающийся"] == 2
        assert "улыбаю" not in forms
        assert "улыбаться" in forms

    def test_masculine_zero_ending(self):
        forms: dict[str, int] = _forms("M", "тумАн")
        assert forms["туман"] == 2
        assert forms["туманами"] == 2


class TestLoadParadigmForms:
    def test_generated_homographs_keep_both_stresses(self, tmp_path: Path):
        path: Path = _write(tmp_path / "paradigms.tsv", "F_K\tдорОга\nADJ_END_K\tдорогОй\n")
        generated, report = load_paradigm_forms(path)
        assert report.records_read == 2
        assert generated["дорогой"].stress_positions == (2, 3)
        assert generated["дорогу"].stress_positions == (2,)
        assert generated["дорогие"].stress_positions == (3,)

    def test_malformed_rows_are_counted(self, tmp_path: Path):
        path: Path = _write(tmp_path / "paradigms.tsv", "# header\nF_K\tкнИга\nADJ\tбелЫй\nXX\tтумАн\n")
        generated, report = load_paradigm_forms(path)
        assert "книгами" in generated
        assert report.malformed == 2
        assert [error.line_number for error in report.errors] == [3, 4]

    def test_strict_mode_raises_with_the_line_number(self, tmp_path: Path):
        path: Path = _write(tmp_path / "paradigms.tsv", "F_K\tкнИга\nADJ\tбелЫй\n")
        with pytest.raises(MalformedRecordError) as excinfo:
            load_paradigm_forms(path, strict=True)
        assert excinfo.value.line_number == 2


class TestLexiconWithParadigms:
    """The shipped dictionary is extended; user dictionaries stay standalone."""

    @pytest.mark.parametrize(
        ("word", "positions"),
        [
            ("книгами", (1,)),
            ("рисую", (2,)),
            ("рисовали", (3,)),
            ("молодыми", (3,)),
            ("читающими", (2,)),
            ("говорят", (3,)),
            ("молчат", (2,)),
            ("настроениями", (3,)),
            ("писателям", (2,)),
            ("дорогой", (2, 3)),
        ],
    )
    def test_shipped_lexicon_covers_inflected_forms(self, lexicon: Lexicon, word: str, positions: tuple[int, ...]):
        entry: AccentEntry | None = lexicon.lookup(word)
        assert entry is not None
        assert entry.stress_positions == positions

    @pytest.mark.parametrize("word", ["кракозябра", "недобрый", "перечитать", "выбежать", "зелёнушка"])
    def test_derived_and_invented_words_stay_unknown(self, lexicon: Lexicon, word: str):
        assert word not in lexicon

    def test_listed_entries_win_over_generated_forms(self, tmp_path: Path):
        dictionary: Path = _write(tmp_path / "lexicon.tsv", "книга\t2\t2\n")
        paradigms: Path = _write(tmp_path / "paradigms.tsv", "F_K\tкнИга\n")
        lex: Lexicon = load_lexicon(dictionary, LexiconConfig(paradigms_path=paradigms))
        assert lex.entries["книга"].stress_positions == (2,)
        assert lex.entries["книгами"].stress_positions == (1,)

    def test_user_dictionary_loads_without_the_shipped_table(self, tmp_path: Path):
        dictionary: Path = _write(tmp_path / "lexicon.tsv", "книга\t2\t1\n")
        lex: Lexicon = load_lexicon(dictionary)
        assert set(lex.entries) == {"книга"}

    def test_function_words_are_not_generated(self, tmp_path: Path):
        dictionary: Path = _write(tmp_path / "lexicon.tsv", "книга\t2\t1\n")
        paradigms: Path = _write(tmp_path / "paradigms.tsv", "M\tтОт\n")
        lex: Lexicon = load_lexicon(dictionary, LexiconConfig(paradigms_path=paradigms))
        assert "тот" not in lex.entries
        assert lex.is_function_word("тот")
        assert "тотами" in lex.entries

    def test_malformed_paradigm_rows_reach_the_lexicon_report(self, tmp_path: Path):
        dictionary: Path = _write(tmp_path / "lexicon.tsv", "книга\t2\t1\n")
        paradigms: Path = _write(tmp_path / "paradigms.tsv", "ADJ\tбелЫй\n")
        lex: Lexicon = load_lexicon(dictionary, LexiconConfig(paradigms_path=paradigms))
        assert lex.report.malformed == 1
        with pytest.raises(MalformedRecordError):
            load_lexicon(dictionary, LexiconConfig(paradigms_path=paradigms, strict=True))

    def test_unseen_quatrain_scans_with_generated_forms(self, lexicon: Lexicon):
        """Inflected forms outside the hand list no longer fall back to rule stress."""
        poem: PoemScansion = analyze_poem(WONDROUS_MOMENT, lexicon)
        assert poem.meter_name == "iamb"
        assert f"красоты{STRESS_MARK}" in poem.lines[3].marked_text
        assert f"чу{STRESS_MARK}дное" in poem.lines[0].marked_text
