"""Two-layer output rendering for harness commands.

Command bodies (JSON, TSV, markdown) go to stdout untouched so they can be
piped; diagnostics and the ``[exit:N | Nms]`` footer go to stderr.
"""

from __future__ import annotations

from dataclasses import dataclass

import typer

EXIT_OK: int = 0
EXIT_USAGE: int = 1
EXIT_DATA: int = 2


@dataclass(slots=True)
class CommandResult:
    """Raw command execution result without presentation metadata in stdout."""

    stdout: bytes = b""
    stderr: bytes = b""
    exit_code: int = EXIT_OK
    duration_ms: int = 0

    @classmethod
    def from_text(
        cls,
        stdout: str = "",
        *,
        stderr: str = "",
        exit_code: int = EXIT_OK,
        duration_ms: int = 0,
    ) -> CommandResult:
        """Convenience constructor for text-based results."""
        return cls(
            stdout=stdout.encode("utf-8"),
            stderr=stderr.encode("utf-8"),
            exit_code=exit_code,
            duration_ms=duration_ms,
        )

    @property
    def text(self) -> str:
        return self.stdout.decode("utf-8", errors="replace")


@dataclass(slots=True)
class OutputEnvelope:
    """Presentation layer for command results."""

    result: CommandResult
    body: str
    notes: str = ""

    @property
    def footer(self) -> str:
        """Metadata footer appended to every presented response."""
        return f"[exit:{self.result.exit_code} | {self.result.duration_ms}ms]"

    def emit(self) -> None:
        """Write the body to stdout and the notes plus footer to stderr."""
        if self.body:
            typer.echo(self.body.rstrip("\n"))
        if self.notes:
            typer.echo(self.notes, err=True)
        typer.echo(self.footer, err=True)

    @classmethod
    def from_result(cls, result: CommandResult) -> OutputEnvelope:
        """Build an output envelope from a raw result."""
        body: str = result.text
        notes: str = result.stderr.decode("utf-8", errors="replace").strip()
        if not body and not notes:
            notes = "(no output)"
        return cls(result=result, body=body, notes=notes)
