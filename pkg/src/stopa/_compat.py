"""Backports of stdlib names missing on older interpreters."""

from __future__ import annotations

import sys

if sys.version_info >= (3, 12):
    from itertools import batched
else:
    from itertools import islice

    def batched(iterable, n):  # noqa: ANN001, ANN201
        """Backport of :func:`itertools.batched` (Python 3.12)."""
        if n < 1:
            raise ValueError("n must be at least one")
        iterator = iter(iterable)
        while batch := tuple(islice(iterator, n)):
            yield batch

if sys.version_info >= (3, 11):
    import tomllib
    from enum import StrEnum
else:
    from enum import Enum

    import tomli as tomllib

    class StrEnum(str, Enum):
        """Minimal backport of :class:`enum.StrEnum` (Python 3.11)."""

        __str__ = str.__str__
        __format__ = str.__format__

        @staticmethod
        def _generate_next_value_(name, start, count, last_values):  # noqa: ANN001, ANN205
            return name.lower()

__all__ = ["StrEnum", "batched", "tomllib"]
