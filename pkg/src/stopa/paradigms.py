"""Inflection classes that expand stressed lemmas into accent dictionary forms.

A paradigm row names a class and a lemma whose stressed vowel is written in
uppercase, e.g. ``ADJ<TAB>бЕлый``. Endings written in lowercase keep the
lemma's stem stress; an uppercase vowel inside an ending moves the stress
onto it. A verb lemma ending in ся/сь yields reflexive forms only, and the
optional third field ``+ся`` adds them next to the plain forms.

Classes cover fixed-stress patterns only. Lemmas whose stress moves across
the paradigm belong in the hand-written dictionary.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

from stopa.phonetics import VOWEL_LETTERS, count_syllables

REFLEXIVE_FLAG: str = "+ся"

_SOFT_ADJECTIVE: tuple[str, ...] = ("ий", "ая", "ее", "ие", "его", "ему", "им", "ем", "ей", "ую", "их", "ими")


def _split(endings: str) -> tuple[str, ...]:
    return tuple(endings.split())


def _participle(suffix: str) -> tuple[str, ...]:
    return tuple(suffix + ending for ending in _SOFT_ADJECTIVE)


def ending_stress(ending: str) -> int | None:
    """1-based syllable of the uppercase vowel inside an ending, or None for a stem-stressed ending."""
    for index, char in enumerate(ending):
        if char.isupper():
            return count_syllables(ending[:index].lower()) + 1
    return None


@dataclass(frozen=True, slots=True)
class Paradigm:
    """Endings of one inflection class; the first ending is the lemma's."""

    name: str
    endings: tuple[str, ...]
    participles: tuple[str, ...] = ()
    verbal: bool = False

    @property
    def lemma_ending(self) -> str:
        return self.endings[0].lower()

    def forms(self) -> Iterator[tuple[str, bool]]:
        """Every ending with a flag telling whether it builds a participle."""
        for ending in self.endings:
            yield ending, False
        for ending in self.participles:
            yield ending, True


def _verb(name: str, finite: str, participles: tuple[str, ...]) -> Paradigm:
    return Paradigm(name=name, endings=_split(finite), participles=participles, verbal=True)


PARADIGMS: dict[str, Paradigm] = {
    paradigm.name: paradigm
    for paradigm in (
        Paradigm("ADJ", _split("ый ая ое ые ого ому ым ом ой ую ых ыми")),
        Paradigm("ADJ_K", _split("ий ая ое ие ого ому им ом ой ую их ими")),
        Paradigm("ADJ_SH", _SOFT_ADJECTIVE),
        Paradigm("ADJ_SOFT", _split("ий яя ее ие его ему им ем ей юю их ими")),
        Paradigm("ADJ_END", _split("Ой Ая Ое Ые Ого Ому Ым Ом Ую Ых Ыми")),
        Paradigm("ADJ_END_K", _split("Ой Ая Ое Ие Ого Ому Им Ом Ую Их Ими")),
        Paradigm("F", _split("а ы е у ой ам ами ах")),
        Paradigm("F_K", _split("а и е у ой ам ами ах")),
        Paradigm("F_SH", _split("а и е у ей ам ами ах")),
        Paradigm("F_YA", _split("я и е ю ей ям ями ях")),
        Paradigm("F_IYA", _split("я и ю ей ям ями ях")),
        Paradigm("F_SOFT", _split("ь и ью ей ям ями ях")),
        Paradigm("N_O", _split("о а у ом е ам ами ах")),
        Paradigm("N_IE", _split("е я ю ем и й ям ями ях")),
        Paradigm("N_YE", _split("е я ю ем ям ями ях")),
        Paradigm("M", ("",) + _split("а у ом е ы ов ам ами ах")),
        Paradigm("M_K", ("",) + _split("а у ом е и ов ам ами ах")),
        Paradigm("M_Y", _split("й я ю ем е и ев ям ями ях")),
        Paradigm("M_SOFT", _split("ь я ю ем е и ей ям ями ях")),
        _verb("V_AJ", "ть ю ешь ет ем ете ют л ла ло ли й йте я", _participle("ющ") + _participle("вш")),
        _verb(
            "V_OVA",
            "овАть Ую Уешь Ует Уем Уете Уют овАл овАла овАло овАли Уй Уйте Уя",
            _participle("Ующ") + _participle("овАвш"),
        ),
        _verb(
            "V_EVA",
            "евАть Ую Уешь Ует Уем Уете Уют евАл евАла евАло евАли Уй Уйте Уя",
            _participle("Ующ") + _participle("евАвш"),
        ),
        _verb(
            "V_OVA_STEM",
            "овать ую уешь ует уем уете уют овал овала овало овали уй уйте уя",
            _participle("ующ") + _participle("овавш"),
        ),
        _verb("V_I", "ить ишь ит им ите ят ил ила ило или я", _participle("ящ") + _participle("ивш")),
        _verb("V_E_STEM", "еть ишь ит им ите ят ел ела ело ели я", _participle("ящ") + _participle("евш")),
        _verb(
            "V_I_END",
            "Ить Ю Ишь Ит Им Ите Ят Ил Ила Ило Или И Я",
            _participle("Ящ") + _participle("Ивш"),
        ),
        # stems that alternate in the first person singular
        _verb(
            "V_I_END_M",
            "Ить Ишь Ит Им Ите Ят Ил Ила Ило Или И Я",
            _participle("Ящ") + _participle("Ивш"),
        ),
        _verb(
            "V_I_END_SH",
            "Ить У Ишь Ит Им Ите Ат Ил Ила Ило Или И А",
            _participle("Ащ") + _participle("Ивш"),
        ),
        _verb(
            "V_SH2",
            "Ать У Ишь Ит Им Ите Ат Ал Ала Ало Али И",
            _participle("Ащ") + _participle("Авш"),
        ),
        _verb(
            "V_E2",
            "Еть Ишь Ит Им Ите Ят Ел Ела Ело Ели И",
            _participle("Ящ") + _participle("Евш"),
        ),
    )
}


@dataclass(frozen=True, slots=True)
class LemmaRecord:
    """A validated paradigm row: the stem to inflect and where the lemma is stressed."""

    paradigm: Paradigm
    stem: str
    stress: int
    plain: bool = True
    reflexive: bool = False

    def expand(self) -> Iterator[tuple[str, int]]:
        """Yield ``(surface, stressed syllable)`` for every form of the lemma."""
        stem_syllables: int = count_syllables(self.stem)
        for ending, is_participle in self.paradigm.forms():
            surface: str = self.stem + ending.lower()
            shift: int | None = ending_stress(ending)
            stress: int = self.stress if shift is None else stem_syllables + shift
            if self.plain:
                yield surface, stress
            if self.reflexive:
                yield surface + _reflexive_suffix(surface, is_participle), stress


def parse_lemma_row(fields: list[str]) -> LemmaRecord:
    """Validate ``CLASS<TAB>lemma[<TAB>+ся]``; raises ValueError with the reason."""
    if len(fields) not in (2, 3):
        raise ValueError(f"expected 2 or 3 tab-separated fields, got {len(fields)}")
    paradigm: Paradigm | None = PARADIGMS.get(fields[0].strip())
    if paradigm is None:
        raise ValueError(f"unknown paradigm {fields[0].strip()!r}")
    marked: str = fields[1].strip()
    capitals: list[int] = [index for index, char in enumerate(marked) if char.isupper()]
    if len(capitals) != 1 or marked[capitals[0]].lower() not in VOWEL_LETTERS:
        raise ValueError(f"lemma {marked!r} must mark exactly one stressed vowel in uppercase")
    lemma: str = marked.lower()
    stress: int = count_syllables(lemma[: capitals[0]]) + 1

    flag: str = fields[2].strip() if len(fields) == 3 else ""
    if flag not in ("", REFLEXIVE_FLAG):
        raise ValueError(f"unknown flag {flag!r}")
    reflexive_only: bool = paradigm.verbal and lemma.endswith(("ся", "сь"))
    if reflexive_only:
        lemma = lemma[:-2]
    if flag and (not paradigm.verbal or reflexive_only):
        raise ValueError(f"{REFLEXIVE_FLAG} applies only to non-reflexive verb lemmas")

    if not lemma.endswith(paradigm.lemma_ending) or len(lemma) == len(paradigm.lemma_ending):
        raise ValueError(f"{marked!r} does not end in {paradigm.lemma_ending!r} as {paradigm.name} requires")
    stem: str = lemma[: len(lemma) - len(paradigm.lemma_ending)]
    stem_syllables: int = count_syllables(stem)
    lemma_shift: int | None = ending_stress(paradigm.endings[0])
    if lemma_shift is None and stress > stem_syllables:
        raise ValueError(f"{paradigm.name} keeps the stem stress but {marked!r} is stressed on its ending")
    if lemma_shift is not None and stress != stem_syllables + lemma_shift:
        raise ValueError(f"{paradigm.name} stresses the ending but {marked!r} is stressed elsewhere")
    return LemmaRecord(
        paradigm=paradigm,
        stem=stem,
        stress=stress,
        plain=not reflexive_only,
        reflexive=reflexive_only or flag == REFLEXIVE_FLAG,
    )


def _reflexive_suffix(surface: str, is_participle: bool) -> str:
    if is_participle or surface[-1] not in VOWEL_LETTERS:
        return "ся"
    return "сь"
