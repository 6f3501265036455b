"""Cell labels of ordinal partitions for finite observation tables.

An observation table holds ``values[i][t] = X_i(T^t(omega))`` for observables
``i = 0..n-1`` and times ``t = 0..d``.  Its label in a partition family is the
vector of pairwise comparison outcomes; two states share a cell exactly when
their labels are equal.

Families and outcome symbols (ASCII, one character per compared pair):

==========  ========================  ============================================
family      pairs                     symbols
==========  ========================  ============================================
``P``       ``0 <= s < t <= d``       ``<`` (x_s < x_t), ``G`` (x_s >= x_t)
``Ptilde``  ``(0, t)``, ``0 < t <= d``  as ``P``
``Q``       ``0 <= s < t <= d``       ``>`` (x_s > x_t), ``L`` (x_s <= x_t)
``R``       ``0 <= s < t <= d``       ``<``, ``>``, ``=``
==========  ========================  ============================================
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Sequence

import numpy as np

from ._errors import InvalidArgumentError
from ._validation import check_table
from .patterns import OrdinalPattern

__all__ = [
    "FAMILIES",
    "ComparisonLabel",
    "compared_pairs",
    "label",
    "label_sequence",
    "label_codes",
    "separated",
    "refines",
    "check_observable_order",
    "label_to_pattern",
    "row_outcomes",
]

FAMILIES = ("P", "Ptilde", "Q", "R")

LT, GE, GT, LE, EQ = "<", "G", ">", "L", "="

_FAMILY_ALIASES = {
    "p": "P", "ptilde": "Ptilde", "p~": "Ptilde", "pt": "Ptilde",
    "q": "Q", "r": "R",
}


def _check_family(family: str) -> str:
    f = _FAMILY_ALIASES.get(str(family).lower())
    if f is None:
        raise InvalidArgumentError(f"unknown partition family {family!r}; expected one of {FAMILIES}")
    return f


def compared_pairs(family: str, d: int) -> tuple[tuple[int, int], ...]:
    """Time pairs ``(s, t)`` compared by ``family`` at order ``d``."""
    return _pairs(_check_family(family), d)


@lru_cache(maxsize=None)
def _pairs(family: str, d: int) -> tuple[tuple[int, int], ...]:
    if family == "Ptilde":
        return tuple((0, t) for t in range(1, d + 1))
    return tuple((s, t) for s in range(d + 1) for t in range(s + 1, d + 1))


@dataclass(frozen=True)
class ComparisonLabel:
    """Outcomes of all pairwise comparisons in lexicographic ``(i, s, t)`` order."""

    family: str
    order: int
    n_observables: int
    outcomes: str

    def __post_init__(self):
        object.__setattr__(self, "family", _check_family(self.family))
        expected = self.n_observables * len(compared_pairs(self.family, self.order))
        if len(self.outcomes) != expected:
            raise InvalidArgumentError(
                f"{self.family} label of order {self.order} with {self.n_observables} "
                f"observables needs {expected} outcomes, got {len(self.outcomes)}")

    def serialize(self) -> str:
        return f"{self.family}|{self.order}|{self.n_observables}|{self.outcomes}"

    @classmethod
    def parse(cls, text: str) -> "ComparisonLabel":
        try:
            family, order, n, outcomes = text.strip().split("|")
            return cls(family, int(order), int(n), outcomes)
        except ValueError as exc:
            raise InvalidArgumentError(f"malformed label {text!r}") from exc

    def __str__(self):
        return self.serialize()


def row_outcomes(row: Sequence, family: str) -> str:
    """Outcome string for one observable's values ``(x_0, ..., x_d)``.

    Plain-Python counterpart of :func:`label_codes`, used for exact
    rational rows where building arrays would dominate the cost.
    """
    family = _check_family(family)
    out = []
    for s, t in compared_pairs(family, len(row) - 1):
        a, b = row[s], row[t]
        if family in ("P", "Ptilde"):
            out.append(LT if a < b else GE)
        elif family == "Q":
            out.append(GT if a > b else LE)
        else:
            out.append(LT if a < b else GT if a > b else EQ)
    return "".join(out)


def label_codes(tables, family: str) -> np.ndarray:
    """Outcome symbols for a stack of tables.

    Parameters
    ----------
    tables : array-like, shape (N, n, d + 1) or (n, d + 1)
        Observation tables, one per state.
    family : {"P", "Ptilde", "Q", "R"}

    Returns
    -------
    numpy.ndarray of dtype ``uint8``, shape (N, n * n_pairs)
        ASCII codes of the outcome symbols.
    """
    family = _check_family(family)
    arr = check_table(tables)
    if arr.ndim == 2:
        arr = arr[None]
    N, n, width = arr.shape
    pairs = compared_pairs(family, width - 1)
    out = np.empty((N, n, len(pairs)), dtype=np.uint8)
    for k, (s, t) in enumerate(pairs):
        xs, xt = arr[:, :, s], arr[:, :, t]
        if family in ("P", "Ptilde"):
            out[:, :, k] = np.where(xs < xt, ord(LT), ord(GE))
        elif family == "Q":
            out[:, :, k] = np.where(xs > xt, ord(GT), ord(LE))
        else:
            out[:, :, k] = np.where(xs < xt, ord(LT), np.where(xs > xt, ord(GT), ord(EQ)))
    return out.reshape(N, n * len(pairs))


def label(table, family: str) -> ComparisonLabel:
    """Label of a single observation table of shape ``(n, d + 1)``."""
    family = _check_family(family)
    arr = check_table(table)
    if arr.ndim != 2:
        raise InvalidArgumentError("label() takes a single table; use label_sequence for stacks")
    codes = label_codes(arr, family)[0]
    return ComparisonLabel(family, arr.shape[1] - 1, arr.shape[0], codes.tobytes().decode("ascii"))


def label_sequence(tables, family: str) -> list[ComparisonLabel]:
    """Labels for a stack of tables of shape ``(N, n, d + 1)``."""
    family = _check_family(family)
    arr = check_table(tables)
    if arr.ndim == 2:
        arr = arr[None]
    codes = label_codes(arr, family)
    d, n = arr.shape[2] - 1, arr.shape[1]
    cache: dict[bytes, ComparisonLabel] = {}
    out = []
    for row in codes:
        key = row.tobytes()
        lab = cache.get(key)
        if lab is None:
            lab = cache[key] = ComparisonLabel(family, d, n, key.decode("ascii"))
        out.append(lab)
    return out


def separated(table1, table2, family: str, d: int | None = None) -> bool:
    """True when the two states lie in different cells at order ``d``.

    Both tables must have the same number of observables and cover at
    least times ``0..d``; extra columns are ignored.
    """
    a, b = check_table(table1), check_table(table2)
    if a.ndim != 2 or b.ndim != 2:
        raise InvalidArgumentError("separated() expects two single tables")
    if a.shape[0] != b.shape[0]:
        raise InvalidArgumentError(
            f"tables have {a.shape[0]} and {b.shape[0]} observables")
    if d is None:
        if a.shape[1] != b.shape[1]:
            raise InvalidArgumentError("tables cover different time ranges; pass d")
        d = a.shape[1] - 1
    if d < 1 or a.shape[1] < d + 1 or b.shape[1] < d + 1:
        raise InvalidArgumentError(f"tables must cover times 0..{d}")
    return label(a[:, :d + 1], family) != label(b[:, :d + 1], family)


def refines(fine: Sequence[Hashable], coarse: Sequence[Hashable]) -> bool:
    """Empirical refinement check on a common sample of states.

    Returns True iff equal fine labels always come with equal coarse labels,
    i.e. the map fine label -> coarse label is well defined on the sample.
    """
    if len(fine) != len(coarse):
        raise InvalidArgumentError(
            f"label sequences differ in length ({len(fine)} vs {len(coarse)})")
    seen: dict = {}
    for f, c in zip(fine, coarse):
        prev = seen.setdefault(f, c)
        if prev != c:
            return False
    return True


def check_observable_order(x_values, y_values) -> bool:
    """Sample check of ``X < Y``: ``Y(a) <= Y(b)`` must imply ``X(a) <= X(b)``.

    Equivalent to X being a nondecreasing function of Y on the sample, which
    is checked after sorting by Y instead of over all pairs.
    """
    x = np.asarray(x_values)
    y = np.asarray(y_values)
    if x.shape != y.shape or x.ndim != 1:
        raise InvalidArgumentError("x_values and y_values must be 1-D and of equal length")
    if len(x) == 0:
        raise InvalidArgumentError("empty sample")
    order = np.argsort(y, kind="stable")
    ys, xs = y[order], x[order]
    same_y = ys[1:] == ys[:-1]
    # equal Y forces equal X (both directions of the implication)
    if np.any(same_y & (xs[1:] != xs[:-1])):
        return False
    return bool(np.all(xs[1:] >= xs[:-1]))


def label_to_pattern(lab: ComparisonLabel, observable: int = 0) -> OrdinalPattern:
    """Ordinal pattern encoded by one observable's comparisons.

    Exact for ``Q`` and ``R``: the outcome ``x_s <= x_t`` matches the
    pattern's tie rule (the later index goes first).  ``P`` cannot tell
    ``x_s > x_t`` from ``x_s == x_t``, so it is exact only for windows
    without equal values.
    """
    if lab.family == "Ptilde":
        raise InvalidArgumentError("Ptilde labels do not determine an ordinal pattern")
    d = lab.order
    pairs = compared_pairs(lab.family, d)
    block = lab.outcomes[observable * len(pairs):(observable + 1) * len(pairs)]
    before = [0] * (d + 1)  # number of indices ranked ahead of each index
    for (s, t), sym in zip(pairs, block):
        s_first = sym == GE if lab.family == "P" else sym == GT
        before[t if s_first else s] += 1
    return OrdinalPattern(d, tuple(sorted(range(d + 1), key=lambda i: before[i])))

