"""Syllabo-tonic scansion, rhyme detection and corpus filtering for Russian verse."""

from stopa.config import ScanOptions, load_options
from stopa.lexicon import Lexicon, load_lexicon
from stopa.rhyme import detect_scheme, rhyme_score
from stopa.scansion import PoemScansion, analyze_poem, scan_line, scan_poem

__all__ = [
    "Lexicon",
    "PoemScansion",
    "ScanOptions",
    "__version__",
    "analyze_poem",
    "detect_scheme",
    "load_lexicon",
    "load_options",
    "rhyme_score",
    "scan_line",
    "scan_poem",
]

__version__ = "0.1.0"
