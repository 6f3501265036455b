"""Plug-in estimators over pattern and label sequences.

All entropies are in nats.  Windows and words overlap, so a series of
length ``N`` has ``N - d*tau`` pattern windows and a symbol sequence of
length ``M`` has ``M - t + 1`` words of length ``t``.
"""
from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from math import factorial, log
from typing import Any, Hashable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from ._errors import InvalidArgumentError
from ._format import fmt_float
from ._validation import check_order
from .patterns import OrdinalPattern, rank_sequence, rank_to_pattern

__all__ = [
    "EmpiricalDistribution",
    "EntropyReport",
    "EntropyRateRow",
    "UndersamplingDiagnostic",
    "pattern_frequencies",
    "shannon_entropy",
    "entropy_from_counts",
    "empirical_permutation_entropy",
    "entropy_rate_estimate",
    "undersampling_diagnostic",
    "symbol_codes",
]

logger = logging.getLogger(__name__)


def _symbol_text(sym) -> str:
    if hasattr(sym, "serialize"):
        return sym.serialize()
    return str(sym)


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Counts of observed symbols.

    Attributes
    ----------
    counts : dict
        Symbol -> number of occurrences.  Only observed symbols appear.
    total : int
        Number of windows (sum of counts).
    alphabet_bound : int or None
        Number of possible symbols, ``(d+1)!`` for patterns; None if unbounded.
    new_in_last_decile : int or None
        Symbols first seen in the last tenth of the window sequence, if the
        order of the windows was known when counting.
    """

    counts: dict
    total: int
    alphabet_bound: int | None = None
    new_in_last_decile: int | None = None

    def __post_init__(self):
        if self.total <= 0:
            raise InvalidArgumentError("a distribution needs at least one observation")
        if sum(self.counts.values()) != self.total:
            raise InvalidArgumentError("counts do not sum to total")
        if any(c < 0 for c in self.counts.values()):
            raise InvalidArgumentError("negative count")

    @classmethod
    def from_symbols(cls, symbols: Iterable[Hashable], alphabet_bound=None) -> "EmpiricalDistribution":
        symbols = list(symbols)
        counts = Counter(symbols)
        return cls(dict(counts), len(symbols), alphabet_bound,
                   _new_in_last_decile(symbols))

    @property
    def frequencies(self) -> dict:
        return {k: c / self.total for k, c in self.counts.items()}

    @property
    def distinct(self) -> int:
        return sum(1 for c in self.counts.values() if c > 0)

    def merge(self, other: "EmpiricalDistribution") -> "EmpiricalDistribution":
        """Combine counts from disjoint chunks of windows."""
        counts = Counter(self.counts)
        counts.update(other.counts)
        bound = self.alphabet_bound if self.alphabet_bound == other.alphabet_bound else None
        return EmpiricalDistribution(dict(counts), self.total + other.total, bound)

    def to_dict(self) -> dict[str, Any]:
        rows = []
        for sym, c in self.counts.items():
            row = {"symbol": _symbol_text(sym), "count": c, "frequency": fmt_float(c / self.total)}
            if isinstance(sym, OrdinalPattern):
                row["rank"] = sym.rank
                row["order"] = sym.order
            rows.append(row)
        rows.sort(key=lambda r: (r.get("rank", 0), r["symbol"]))
        return {
            "total": self.total,
            "alphabet_bound": self.alphabet_bound,
            "distinct": self.distinct,
            "symbols": rows,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self) -> str:
        d = self.to_dict()
        lines = [f"total={d['total']}", f"alphabet_bound={d['alphabet_bound']}",
                 f"distinct={d['distinct']}"]
        for r in d["symbols"]:
            lines.append(f"symbol={r['symbol']} count={r['count']} frequency={r['frequency']!r}")
        return "\n".join(lines) + "\n"


def _new_in_last_decile(symbols: Sequence[Hashable]) -> int:
    cut = len(symbols) - len(symbols) // 10
    early = set(symbols[:cut])
    return len(set(symbols[cut:]) - early)


def pattern_frequencies(series, d: int, tau: int = 1) -> EmpiricalDistribution:
    """Relative frequencies of ordinal patterns over all overlapping windows.

    The frequency of a pattern is its number of windows divided by
    ``len(series) - d * tau``.
    """
    ranks = rank_sequence(series, d, tau)
    values, first_idx, counts = np.unique(ranks, return_index=True, return_counts=True)
    cut = len(ranks) - len(ranks) // 10
    dist = {rank_to_pattern((d, int(r))): int(c) for r, c in zip(values, counts)}
    return EmpiricalDistribution(dist, len(ranks), factorial(d + 1),
                                 int(np.sum(first_idx >= cut)))


def entropy_from_counts(counts) -> float:
    """Plug-in Shannon entropy ``-sum p ln p`` of a count vector, with 0 ln 0 = 0."""
    c = np.asarray(list(counts), dtype=float)
    c = c[c > 0]
    if c.size == 0:
        raise InvalidArgumentError("no positive counts")
    p = c / c.sum()
    # + 0.0 turns the -0.0 of a single-symbol distribution into 0.0
    return float(-np.sum(p * np.log(p))) + 0.0


def shannon_entropy(dist: EmpiricalDistribution | Mapping[Hashable, float]) -> float:
    """Shannon entropy in nats of a distribution or of a mapping to counts/weights."""
    counts = dist.counts if isinstance(dist, EmpiricalDistribution) else dist
    return entropy_from_counts(counts.values())


class UndersamplingDiagnostic(NamedTuple):
    ratio: float
    warning: bool


def undersampling_diagnostic(dist: EmpiricalDistribution, d: int) -> UndersamplingDiagnostic:
    """Share of the ``(d+1)!`` patterns observed, plus a still-growing flag.

    The flag is raised when new patterns kept appearing in the last tenth of
    the series.  Without ordering information the Good-Turing estimate
    (singletons present) is used instead.  A fully saturated alphabet never
    warns.
    """
    d = check_order(d)
    possible = factorial(d + 1)
    ratio = dist.distinct / possible
    if dist.distinct >= possible:
        return UndersamplingDiagnostic(ratio, False)
    if dist.new_in_last_decile is not None:
        growing = dist.new_in_last_decile > 0
    else:
        growing = any(c == 1 for c in dist.counts.values())
    return UndersamplingDiagnostic(ratio, growing)


@dataclass(frozen=True)
class EntropyReport:
    """Summary of an empirical permutation entropy computation."""

    order: int
    delay: int
    length: int
    windows: int
    shannon_entropy: float
    permutation_entropy: float
    distinct_symbols: int
    undersampling_ratio: float
    undersampling_warning: bool
    distribution: EmpiricalDistribution | None = field(default=None, compare=False, repr=False)

    def to_dict(self, include_distribution=True, base2=False) -> dict[str, Any]:
        scale = 1 / log(2) if base2 else 1.0
        out = {
            "order": self.order,
            "delay": self.delay,
            "length": self.length,
            "windows": self.windows,
            "unit": "bits" if base2 else "nats",
            "shannon_entropy": fmt_float(self.shannon_entropy * scale),
            "permutation_entropy": fmt_float(self.permutation_entropy * scale),
            "distinct_symbols": self.distinct_symbols,
            "undersampling_ratio": fmt_float(self.undersampling_ratio),
            "undersampling_warning": self.undersampling_warning,
        }
        if include_distribution and self.distribution is not None:
            out["distribution"] = self.distribution.to_dict()["symbols"]
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), sort_keys=True)

    def to_text(self, **kw) -> str:
        d = self.to_dict(include_distribution=False, **kw)
        return "".join(f"{k}={d[k]}\n" for k in sorted(d))


def empirical_permutation_entropy(series, d: int, tau: int = 1) -> EntropyReport:
    """Plug-in permutation entropy ``-(1/d) sum p ln p`` of order ``d``."""
    dist = pattern_frequencies(series, d, tau)
    h = shannon_entropy(dist)
    diag = undersampling_diagnostic(dist, d)
    return EntropyReport(
        order=d,
        delay=tau,
        length=len(series),
        windows=dist.total,
        shannon_entropy=h,
        permutation_entropy=h / d,
        distinct_symbols=dist.distinct,
        undersampling_ratio=diag.ratio,
        undersampling_warning=diag.warning,
        distribution=dist,
    )


class EntropyRateRow(NamedTuple):
    t: int
    block_entropy: float
    rate: float
    increment: float


def symbol_codes(symbols) -> tuple[np.ndarray, int]:
    """Map arbitrary hashable symbols to dense integer codes ``0..K-1``."""
    arr = np.asarray(symbols) if not isinstance(symbols, np.ndarray) else symbols
    if arr.ndim == 1 and arr.dtype != object:
        uniq, codes = np.unique(arr, return_inverse=True)
        return codes.astype(np.int64), len(uniq)
    table: dict = {}
    codes = np.fromiter((table.setdefault(s, len(table)) for s in symbols), dtype=np.int64)
    return codes, len(table)


def entropy_rate_estimate(symbols, t_max: int) -> list[EntropyRateRow]:
    """Block entropies of overlapping words of length ``1..t_max``.

    Each row carries ``H_t``, ``H_t / t`` and ``H_t - H_{t-1}`` (``H_0 = 0``).
    """
    t_max = check_order(t_max, name="t_max")
    codes, k = symbol_codes(symbols)
    n = len(codes)
    if n < t_max:
        raise InvalidArgumentError(
            f"t_max={t_max} too large for a sequence of length {n}")
    rows = []
    words = codes
    prev = 0.0
    for t in range(1, t_max + 1):
        if t > 1:
            key = words[:-1] * k + codes[t - 1:]
            _, words = np.unique(key, return_inverse=True)
            words = words.astype(np.int64)
        h = entropy_from_counts(np.bincount(words))
        rows.append(EntropyRateRow(t, h, h / t, h - prev))
        prev = h
    return rows
