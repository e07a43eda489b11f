"""Serializable views of scansion results for the analyze output document."""

from __future__ import annotations

from pydantic import BaseModel, Field

from stopa.phonetics import render_phones
from stopa.rhyme import clausula_for_line
from stopa.scansion import LineScansion, PoemScansion


class DefectReport(BaseModel):
    off_ictus: int = 0
    off_ictus_monosyllabic: int = 0
    avoidable_misses: int = 0
    penalty: float = 0.0
    stressed_ictuses: int = 0
    ictuses: int = 0


class LineReport(BaseModel):
    """One scanned line as it appears in the analyze document."""

    text: str
    marked: str
    meter: str
    technicality: float = Field(ge=0.0, le=1.0)
    low_confidence: bool
    stressed_syllables: list[int]
    clausula: str
    template_scores: dict[str, float]
    defects: DefectReport


class PoemReport(BaseModel):
    index: int
    meter: str
    technicality: float = Field(ge=0.0, le=1.0)
    rhyme_scheme: str
    lines: list[LineReport]


class AnalysisDocument(BaseModel):
    """Top-level analyze output: poems in input order."""

    poems: list[PoemReport] = Field(default_factory=list)
    notice: str | None = None


def line_report(line: LineScansion) -> LineReport:
    return LineReport(
        text=line.text,
        marked=line.marked_text,
        meter=str(line.meter.name),
        technicality=round(line.technicality, 6),
        low_confidence=line.low_confidence,
        stressed_syllables=list(line.assignment.stressed_positions),
        clausula=render_phones(clausula_for_line(line)),
        template_scores={str(name): round(score, 6) for name, score in line.template_scores.items()},
        defects=DefectReport(
            off_ictus=line.defects.off_ictus,
            off_ictus_monosyllabic=line.defects.off_ictus_mono,
            avoidable_misses=line.defects.avoidable_misses,
            penalty=round(line.defects.penalty, 6),
            stressed_ictuses=line.defects.stressed_ictuses,
            ictuses=line.defects.n_ictus,
        ),
    )


def poem_report(index: int, poem: PoemScansion) -> PoemReport:
    return PoemReport(
        index=index,
        meter=poem.meter_name,
        technicality=round(poem.poem_technicality, 6),
        rhyme_scheme=poem.rhyme_scheme or "",
        lines=[line_report(line) for line in poem.lines],
    )
