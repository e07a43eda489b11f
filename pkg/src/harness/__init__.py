"""Command-line harness for the stopa scansion engine."""

__all__ = [
    "__version__",
]

__version__ = "0.1.0"
