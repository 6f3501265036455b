"""Ordinal patterns, comparison partitions and permutation entropy.

The package has a sample-based side (``patterns``, ``labels``, ``entropy``,
``transformers``) and an exact side (``exactpl``) that computes ordinal
partitions of piecewise-linear maps with rational arithmetic.
"""
from ._errors import InputParseError, InvalidArgumentError, ResourceLimitError
from .entropy import *  # noqa: F401,F403
from .entropy import __all__ as _entropy_all
from .exactpl import *  # noqa: F401,F403
from .exactpl import __all__ as _exactpl_all
from .intervals import Interval, parse_interval
from .io import ingest, ingest_symbols
from .labels import *  # noqa: F401,F403
from .labels import __all__ as _labels_all
from .patterns import *  # noqa: F401,F403
from .patterns import __all__ as _patterns_all
from .systems import *  # noqa: F401,F403
from .systems import __all__ as _systems_all
from .transformers import OrdinalEntropyRate, OrdinalPatternEncoder, PermutationEntropy

__version__ = "0.1.0"

__all__ = [
    "InputParseError", "InvalidArgumentError", "ResourceLimitError",
    "Interval", "parse_interval", "ingest", "ingest_symbols",
    "OrdinalPatternEncoder", "PermutationEntropy", "OrdinalEntropyRate",
    *_patterns_all, *_labels_all, *_entropy_all, *_exactpl_all, *_systems_all,
]
