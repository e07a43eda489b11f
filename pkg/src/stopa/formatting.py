"""Table rendering for reports: markdown for people, TSV and CSV for pipelines."""

from __future__ import annotations

import pandas as pd

from stopa.phonetics import STRESS_MARK


def md_cell(value: object) -> str:
    """Clean a value for use in a markdown table cell."""
    if value is None:
        return ""
    if isinstance(value, float):
        return format_score(value)
    return str(value).replace("\n", " ").replace("|", "\\|")


def format_score(value: float | None, decimals: int = 4) -> str:
    if value is None:
        return "N/A"
    return f"{value:.{decimals}f}"


def format_share(count: int, total: int, decimals: int = 1) -> str:
    """Percentage of a total, computed on demand."""
    if total <= 0:
        return f"{0:.{decimals}f}%"
    return f"{100.0 * count / total:.{decimals}f}%"


def build_markdown_table(headers: list[str], rows: list[list[str]], alignment: list[str] | None = None) -> str:
    """Build a markdown table from headers and row data.

    Args:
        headers: Column header labels.
        rows: Cell values as strings, one list per row.
        alignment: Optional 'l', 'r' or 'c' per column.
    """
    if not headers:
        return ""
    align_map: dict[str, str] = {"l": ":---", "r": "---:", "c": ":---:"}
    markers: list[str] = alignment if alignment is not None else ["l"] * len(headers)
    lines: list[str] = [
        "| " + " | ".join(headers) + " |",
        "| " + " | ".join(align_map.get(marker, "---") for marker in markers) + " |",
    ]
    for row in rows:
        padded: list[str] = row + [""] * (len(headers) - len(row))
        lines.append("| " + " | ".join(padded[: len(headers)]) + " |")
    return "\n".join(lines)


def frame_to_markdown(frame: pd.DataFrame, *, numeric_right: bool = True) -> str:
    """Render a dataframe as a markdown table; numeric columns are right-aligned."""
    if frame.empty:
        return "(no rows)"
    headers: list[str] = [str(column) for column in frame.columns]
    alignment: list[str] = [
        "r" if numeric_right and pd.api.types.is_numeric_dtype(frame[column]) else "l" for column in frame.columns
    ]
    rows: list[list[str]] = [[md_cell(value) for value in row] for row in frame.itertuples(index=False)]
    return build_markdown_table(headers, rows, alignment=alignment)


def frame_to_tsv(frame: pd.DataFrame) -> str:
    return frame.to_csv(sep="\t", index=False, float_format="%.6g", lineterminator="\n")


def mark_diff(gold: str, predicted: str) -> str:
    """One-line gold/predicted comparison; identical lines collapse to a single copy."""
    if gold == predicted:
        return f"  = {gold}"
    return f"  gold: {gold}\n  pred: {predicted}"


def count_marks(text: str) -> int:
    return text.count(STRESS_MARK)
