"""Ordinal patterns of order ``d`` and their Lehmer-code ranks.

A window ``(x_0, ..., x_d)`` has ordinal pattern ``pi`` when
``x[pi[0]] >= x[pi[1]] >= ... >= x[pi[d]]``, and equal values are listed
with the later time index first.  This makes the map from windows to
patterns total and single-valued.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import NamedTuple, Sequence

import numpy as np

from ._errors import InvalidArgumentError
from ._validation import check_order, check_series

__all__ = [
    "OrdinalPattern",
    "PatternRank",
    "ordinal_pattern",
    "pattern_to_rank",
    "rank_to_pattern",
    "pattern_sequence",
    "rank_sequence",
    "windows_to_patterns",
    "patterns_to_ranks",
]


@dataclass(frozen=True, order=True)
class OrdinalPattern:
    """A permutation of ``{0, ..., order}`` describing a window's rank order."""

    order: int
    perm: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        object.__setattr__(self, "perm", perm)
        if self.order < 1:
            raise InvalidArgumentError(f"order must be >= 1, got {self.order}")
        if len(perm) != self.order + 1 or sorted(perm) != list(range(self.order + 1)):
            raise InvalidArgumentError(
                f"{perm} is not a permutation of 0..{self.order}")

    @classmethod
    def from_perm(cls, perm: Sequence[int]) -> "OrdinalPattern":
        return cls(len(perm) - 1, tuple(perm))

    @property
    def rank(self) -> int:
        return pattern_to_rank(self).rank

    def __str__(self):
        return "(" + ",".join(str(p) for p in self.perm) + ")"


class PatternRank(NamedTuple):
    """Integer code of an ordinal pattern, ``0 <= rank < (order + 1)!``."""

    order: int
    rank: int


def ordinal_pattern(window) -> OrdinalPattern:
    """Return the ordinal pattern of a single window of ``d + 1`` values.

    Parameters
    ----------
    window : array-like of float
        At least two finite values.

    Returns
    -------
    OrdinalPattern
        Indices sorted by descending value; ties put the larger index first.
    """
    x = check_series(window, min_length=2, name="window")
    n = len(x)
    perm = sorted(range(n), key=lambda i: (-x[i], -i))
    return OrdinalPattern(n - 1, tuple(perm))


def pattern_to_rank(p: OrdinalPattern) -> PatternRank:
    """Lehmer-code rank of ``p.perm``.

    The digit for position ``i`` counts the later entries smaller than
    ``perm[i]``; digits are weighted by ``(d - i)!``.
    """
    perm = p.perm
    d = p.order
    rank = 0
    for i in range(d):
        smaller = sum(1 for j in range(i + 1, d + 1) if perm[j] < perm[i])
        rank += smaller * factorial(d - i)
    return PatternRank(d, rank)


def rank_to_pattern(r: PatternRank | tuple[int, int]) -> OrdinalPattern:
    """Inverse of :func:`pattern_to_rank`."""
    d, rank = int(r[0]), int(r[1])
    check_order(d)
    if not 0 <= rank < factorial(d + 1):
        raise InvalidArgumentError(
            f"rank {rank} out of range for order {d} (must be < {factorial(d + 1)})")
    remaining = list(range(d + 1))
    perm = []
    for i in range(d + 1):
        f = factorial(d - i)
        digit, rank = divmod(rank, f)
        perm.append(remaining.pop(digit))
    return OrdinalPattern(d, tuple(perm))


def _sliding_windows(x: np.ndarray, d: int, tau: int) -> np.ndarray:
    n_windows = len(x) - d * tau
    idx = np.arange(n_windows)[:, None] + tau * np.arange(d + 1)[None, :]
    return x[idx]


def windows_to_patterns(windows: np.ndarray) -> np.ndarray:
    """Vectorised pattern extraction for a 2-D array of windows.

    Returns an integer array of the same shape whose row ``k`` is the
    permutation of row ``k`` of ``windows``.
    """
    w = np.asarray(windows)
    d = w.shape[1] - 1
    # stable sort of reversed columns by descending value puts later indices first on ties
    order = np.argsort(-w[:, ::-1], axis=1, kind="stable")
    return d - order


def patterns_to_ranks(perms: np.ndarray) -> np.ndarray:
    """Vectorised Lehmer ranks for a 2-D array of permutations."""
    perms = np.asarray(perms)
    d = perms.shape[1] - 1
    ranks = np.zeros(perms.shape[0], dtype=np.int64)
    for i in range(d):
        smaller = (perms[:, i + 1:] < perms[:, i:i + 1]).sum(axis=1)
        ranks += smaller * factorial(d - i)
    return ranks


def rank_sequence(series, d: int, tau: int = 1) -> np.ndarray:
    """Ranks of the ordinal patterns at every window start of ``series``."""
    check_order(d)
    if tau < 1:
        raise InvalidArgumentError(f"delay must be a positive integer, got {tau}")
    x = check_series(series, min_length=d * tau + 1)
    return patterns_to_ranks(windows_to_patterns(_sliding_windows(x, d, tau)))


def pattern_sequence(series, d: int, tau: int = 1) -> list[OrdinalPattern]:
    """Ordinal patterns of ``(x_t, x_{t+tau}, ..., x_{t+d*tau})`` for every ``t``.

    The output has ``len(series) - d * tau`` entries.
    """
    ranks = rank_sequence(series, d, tau)
    cache: dict[int, OrdinalPattern] = {}
    out = []
    for r in ranks.tolist():
        p = cache.get(r)
        if p is None:
            p = cache[r] = rank_to_pattern((d, r))
        out.append(p)
    return out
