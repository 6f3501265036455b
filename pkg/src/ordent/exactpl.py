"""Exact rational arithmetic for piecewise-linear maps of [0, 1].

Ordinal partitions of a PL map under a PL (or step) observable are finite
unions of rational intervals, and so are their pullback refinements.  This
module computes them exactly, together with their Lebesgue measures, and
evaluates partition entropies from those exact measures.

The construction used throughout: collect every point where some iterate
``T^s`` has a piece boundary, where a cell boundary is hit, or where two
compared values cross.  Between consecutive points (an open "atom") every
label is constant, so labelling each atom by its midpoint and each boundary
point by itself gives the partition exactly.
"""
from __future__ import annotations

import os
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, NamedTuple, Sequence

import mpmath

from ._errors import InvalidArgumentError, ResourceLimitError
from ._format import fmt_fraction
from .intervals import Interval, as_fraction, intersect
from .labels import ComparisonLabel, _check_family, compared_pairs, row_outcomes

__all__ = [
    "Piece",
    "PiecewiseLinearMap",
    "Cell",
    "IntervalCellPartition",
    "ExactRateRow",
    "DEFAULT_BUDGET",
    "tent_map",
    "identity_map",
    "compose",
    "iterate",
    "exact_orbit",
    "ordinal_cells",
    "level_set_partition",
    "binary_partition",
    "join",
    "pullback_refine",
    "partition_entropy",
    "partition_rate_table",
    "entropy_rate_table",
]

DEFAULT_BUDGET = 10**6
DEFAULT_PRECISION = 30


def default_budget() -> int:
    env = os.environ.get("ORDENT_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InvalidArgumentError(f"ORDENT_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


# ---------------------------------------------------------------------------
# piecewise-linear maps


@dataclass(frozen=True)
class Piece:
    interval: Interval
    slope: Fraction
    intercept: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", as_fraction(self.slope))
        object.__setattr__(self, "intercept", as_fraction(self.intercept))

    def __call__(self, x):
        return self.slope * x + self.intercept

    def image(self) -> Interval:
        iv = self.interval
        a, b = self(iv.lo), self(iv.hi)
        if self.slope >= 0:
            return Interval(a, b, iv.lo_closed, iv.hi_closed) if a != b else Interval.point(a)
        return Interval(b, a, iv.hi_closed, iv.lo_closed)

    def preimage(self, target: Interval) -> Interval | None:
        """Points of this piece mapped into ``target``."""
        iv = self.interval
        if self.slope == 0:
            return iv if self.intercept in target else None
        lo = (target.lo - self.intercept) / self.slope
        hi = (target.hi - self.intercept) / self.slope
        if self.slope > 0:
            pre = Interval(lo, hi, target.lo_closed, target.hi_closed)
        else:
            pre = Interval(hi, lo, target.hi_closed, target.lo_closed)
        return intersect(pre, iv)


class PiecewiseLinearMap:
    """A total piecewise-affine function on [0, 1] with rational data.

    Parameters
    ----------
    pieces : sequence of Piece
        Their intervals must tile [0, 1] exactly, endpoint flags included.
    """

    def __init__(self, pieces: Iterable[Piece]):
        pieces = sorted(pieces, key=lambda p: (p.interval.lo, not p.interval.lo_closed))
        self.pieces = tuple(_merge_pieces(pieces))
        self._los = [p.interval.lo for p in self.pieces]
        self._check_tiling()

    def _check_tiling(self):
        ps = self.pieces
        if not ps:
            raise InvalidArgumentError("a map needs at least one piece")
        first, last = ps[0].interval, ps[-1].interval
        if first.lo != 0 or not first.lo_closed or last.hi != 1 or not last.hi_closed:
            raise InvalidArgumentError("pieces must cover [0, 1] including both endpoints")
        for a, b in zip(ps, ps[1:]):
            ia, ib = a.interval, b.interval
            if ia.hi != ib.lo or ia.hi_closed == ib.lo_closed:
                raise InvalidArgumentError(f"pieces {ia} and {ib} do not tile")

    @classmethod
    def from_breakpoints(cls, breakpoints: Sequence, coefficients: Sequence[tuple],
                         owner: str = "left") -> "PiecewiseLinearMap":
        """Build from ascending ``0 = b_0 < ... < b_m = 1`` and ``(slope, intercept)`` per piece.

        ``owner="left"`` assigns each interior breakpoint to the piece on its
        left, giving ``[b0,b1], (b1,b2], ...``; ``"right"`` gives
        ``[b0,b1), [b1,b2), ..., [b_{m-1}, b_m]``.
        """
        bs = [as_fraction(b) for b in breakpoints]
        if len(coefficients) != len(bs) - 1:
            raise InvalidArgumentError("need one (slope, intercept) per interval")
        if any(b1 >= b2 for b1, b2 in zip(bs, bs[1:])) or bs[0] != 0 or bs[-1] != 1:
            raise InvalidArgumentError("breakpoints must ascend strictly from 0 to 1")
        m = len(bs) - 1
        pieces = []
        for j, (a, c) in enumerate(coefficients):
            if owner == "left":
                iv = Interval(bs[j], bs[j + 1], j == 0, True)
            elif owner == "right":
                iv = Interval(bs[j], bs[j + 1], True, j == m - 1)
            else:
                raise InvalidArgumentError("owner must be 'left' or 'right'")
            pieces.append(Piece(iv, a, c))
        return cls(pieces)

    def piece_at(self, x) -> Piece:
        i = bisect_right(self._los, x) - 1
        for k in (i, i - 1, i - 2):
            if 0 <= k < len(self.pieces) and x in self.pieces[k].interval:
                return self.pieces[k]
        raise InvalidArgumentError(f"{x} outside [0, 1]")

    def __call__(self, x):
        return self.piece_at(x)(x)

    @property
    def breakpoints(self) -> list[Fraction]:
        pts = {Fraction(0), Fraction(1)}
        for p in self.pieces:
            pts.add(p.interval.lo)
            pts.add(p.interval.hi)
        return sorted(pts)

    def preimages(self, y) -> set[Fraction]:
        """Points ``x`` with ``f(x) = y`` on pieces of nonzero slope."""
        out = set()
        for p in self.pieces:
            if p.slope != 0:
                x = (y - p.intercept) / p.slope
                if x in p.interval:
                    out.add(x)
        return out

    def is_self_map(self) -> bool:
        unit = Interval(0, 1)
        return all(intersect(p.image(), unit) == p.image() for p in self.pieces)

    def __len__(self):
        return len(self.pieces)

    def __eq__(self, other):
        return isinstance(other, PiecewiseLinearMap) and self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def __repr__(self):
        body = ", ".join(f"{p.interval}: {p.slope}x+{p.intercept}" for p in self.pieces)
        return f"PiecewiseLinearMap({body})"

    def to_pl(self) -> "PiecewiseLinearMap":
        return self


def _merge_pieces(pieces: list[Piece]) -> list[Piece]:
    out: list[Piece] = []
    for p in pieces:
        if out:
            q = out[-1]
            iq, ip = q.interval, p.interval
            if (q.slope, q.intercept) == (p.slope, p.intercept) and iq.hi == ip.lo \
                    and iq.hi_closed != ip.lo_closed:
                out[-1] = Piece(Interval(iq.lo, ip.hi, iq.lo_closed, ip.hi_closed), p.slope, p.intercept)
                continue
        out.append(p)
    return out


def tent_map() -> PiecewiseLinearMap:
    """``2w`` on ``[0, 1/2]``, ``2 - 2w`` on ``(1/2, 1]``."""
    return PiecewiseLinearMap.from_breakpoints([0, Fraction(1, 2), 1], [(2, 0), (-2, 2)])


def identity_map() -> PiecewiseLinearMap:
    return PiecewiseLinearMap([Piece(Interval(0, 1), 1, 0)])


def compose(f: PiecewiseLinearMap, g: PiecewiseLinearMap) -> PiecewiseLinearMap:
    """Exact ``f o g``; ``g`` must map [0, 1] into [0, 1]."""
    f, g = f.to_pl(), g.to_pl()
    pieces = []
    for gp in g.pieces:
        if gp.slope == 0:
            fp = f.piece_at(gp.intercept)
            pieces.append(Piece(gp.interval, 0, fp(gp.intercept)))
            continue
        covered = Fraction(0)
        for fp in f.pieces:
            sub = gp.preimage(fp.interval)
            if sub is None:
                continue
            covered += sub.length
            pieces.append(Piece(sub, fp.slope * gp.slope, fp.slope * gp.intercept + fp.intercept))
        if covered != gp.interval.length:
            raise InvalidArgumentError("inner map leaves [0, 1]; composition undefined")
    return PiecewiseLinearMap(pieces)


def iterate(f: PiecewiseLinearMap, t: int) -> PiecewiseLinearMap:
    """``f`` composed with itself ``t`` times (identity for ``t = 0``)."""
    out = identity_map()
    for _ in range(t):
        out = compose(f, out)
    return out


def exact_orbit(f: PiecewiseLinearMap, x0, length: int) -> list[Fraction]:
    x = as_fraction(x0)
    out = [x]
    for _ in range(length - 1):
        x = f(x)
        out.append(x)
    return out


# ---------------------------------------------------------------------------
# cell partitions


@dataclass(frozen=True)
class Cell:
    label: Hashable
    support: tuple[Interval, ...]
    measure: Fraction


class IntervalCellPartition:
    """Partition of [0, 1] into labelled finite unions of rational intervals."""

    def __init__(self, cells: Iterable[Cell]):
        self.cells = tuple(cells)
        flat = sorted(((iv, c.label) for c in self.cells for iv in c.support),
                      key=lambda e: (e[0].lo, not e[0].lo_closed))
        self._flat = flat
        self._los = [iv.lo for iv, _ in flat]
        self._validate()

    def _validate(self):
        flat = self._flat
        if not flat:
            raise InvalidArgumentError("empty partition")
        first, last = flat[0][0], flat[-1][0]
        if first.lo != 0 or not first.lo_closed or last.hi != 1 or not last.hi_closed:
            raise InvalidArgumentError("cells must cover [0, 1]")
        for (a, _), (b, _) in zip(flat, flat[1:]):
            if a.hi != b.lo or a.hi_closed == b.lo_closed:
                raise InvalidArgumentError(f"supports {a} and {b} overlap or leave a gap")
        labels = [c.label for c in self.cells]
        if len(set(labels)) != len(labels):
            raise InvalidArgumentError("duplicate cell labels")
        for c in self.cells:
            if c.measure != sum((iv.length for iv in c.support), Fraction(0)):
                raise InvalidArgumentError(f"measure of cell {c.label} does not match its support")
        if sum((c.measure for c in self.cells), Fraction(0)) != 1:
            raise InvalidArgumentError("cell measures do not sum to 1")

    def __len__(self):
        return len(self.cells)

    def __iter__(self):
        return iter(self.cells)

    @property
    def labels(self) -> list:
        return [c.label for c in self.cells]

    @property
    def measures(self) -> dict:
        return {c.label: c.measure for c in self.cells}

    @property
    def boundary_points(self) -> set[Fraction]:
        pts = set()
        for iv, _ in self._flat:
            pts.add(iv.lo)
            pts.add(iv.hi)
        return pts

    def label_at(self, x) -> Hashable:
        i = bisect_right(self._los, x) - 1
        for k in (i, i - 1, i - 2):
            if 0 <= k < len(self._flat) and x in self._flat[k][0]:
                return self._flat[k][1]
        raise InvalidArgumentError(f"{x} outside [0, 1]")

    def positive_cells(self) -> list[Cell]:
        return [c for c in self.cells if c.measure > 0]

    def to_text(self) -> str:
        """One line per interval: label, left, right, flags, length."""
        lines = []
        for iv, lab in self._flat:
            flags = ("[" if iv.lo_closed else "(") + ("]" if iv.hi_closed else ")")
            lines.append(f"{_label_text(lab)}\t{fmt_fraction(iv.lo)}\t{fmt_fraction(iv.hi)}"
                         f"\t{flags}\t{fmt_fraction(iv.length)}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"IntervalCellPartition({len(self.cells)} cells)"


def _label_text(lab) -> str:
    if isinstance(lab, ComparisonLabel):
        return lab.serialize()
    if isinstance(lab, tuple):
        return " ".join(_label_text(x) for x in lab)
    return str(lab)


def _partition_from_points(points: set[Fraction], label_fn: Callable[[Fraction], Hashable],
                           budget: int) -> IntervalCellPartition:
    pts = sorted(p for p in points if 0 <= p <= 1)
    if not pts or pts[0] != 0 or pts[-1] != 1:
        pts = sorted(set(pts) | {Fraction(0), Fraction(1)})
    if 2 * len(pts) > budget:
        raise ResourceLimitError(f"{2 * len(pts) - 1} intervals exceed the budget of {budget}")
    atoms: list[tuple[Interval, Hashable]] = []
    for a, b in zip(pts, pts[1:]):
        atoms.append((Interval.point(a), label_fn(a)))
        atoms.append((Interval.open(a, b), label_fn((a + b) / 2)))
    atoms.append((Interval.point(pts[-1]), label_fn(pts[-1])))

    # fuse consecutive atoms that share a label
    runs: list[list] = []
    for iv, lab in atoms:
        if runs and runs[-1][2] == lab:
            runs[-1][1] = iv
        else:
            runs.append([iv, iv, lab])
    support: dict[Hashable, list[Interval]] = {}
    for first, last, lab in runs:
        support.setdefault(lab, []).append(Interval(first.lo, last.hi, first.lo_closed, last.hi_closed))
    cells = [Cell(lab, tuple(ivs), sum((iv.length for iv in ivs), Fraction(0)))
             for lab, ivs in support.items()]
    return IntervalCellPartition(cells)


def _pullback_points(f: PiecewiseLinearMap, seeds: set[Fraction], depth: int, budget: int) -> set[Fraction]:
    """Union of ``f^{-s}(seeds)`` for ``s = 0..depth``."""
    out = set(seeds)
    level = set(seeds)
    for _ in range(depth):
        nxt = set()
        for y in level:
            nxt |= f.preimages(y)
        nxt -= out
        out |= nxt
        level = nxt
        if 2 * len(out) > budget:
            raise ResourceLimitError(f"more than {budget} intervals needed")
    return out


def _affine_on(points_values: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]):
    (x1, y1), (x2, y2) = points_values
    slope = (y2 - y1) / (x2 - x1)
    return slope, y1 - slope * x1


def _as_observable(observable) -> PiecewiseLinearMap:
    if observable is None or observable == "id":
        return identity_map()
    if hasattr(observable, "to_pl"):
        return observable.to_pl()
    raise InvalidArgumentError(f"unsupported observable {observable!r}")


def ordinal_cells(T: PiecewiseLinearMap, observable=None, d: int = 1, family: str = "P",
                  budget: int | None = None) -> IntervalCellPartition:
    """Exact cells of the order-``d`` ordinal partition of a single observable.

    Parameters
    ----------
    T : PiecewiseLinearMap
        Lebesgue-preserving self-map of [0, 1].
    observable : PiecewiseLinearMap, StepObservable or None
        ``None`` (or ``"id"``) means the identity.
    d : int
        Order, at least 1.
    family : {"P", "Ptilde", "Q", "R"}
    budget : int, optional
        Maximum number of intervals; defaults to ``ORDENT_BUDGET`` or 10**6.

    Returns
    -------
    IntervalCellPartition
        Cells labelled by :class:`ComparisonLabel`; measures are Lebesgue.
    """
    if d < 1:
        raise InvalidArgumentError("d must be >= 1")
    family = _check_family(family)
    budget = default_budget() if budget is None else budget
    X = _as_observable(observable)
    T = T.to_pl()

    def values(x):
        row = []
        for _ in range(d + 1):
            row.append(X(x))
            x = T(x)
        return row

    seeds = set(T.breakpoints) | set(X.breakpoints)
    pts = _pullback_points(T, seeds, d, budget)

    # add crossing points of X o T^s and X o T^t inside each atom
    srt = sorted(pts)
    pairs = compared_pairs(family, d)
    roots = set()
    for a, b in zip(srt, srt[1:]):
        x1, x2 = a + (b - a) / 3, a + 2 * (b - a) / 3
        v1, v2 = values(x1), values(x2)
        lines = [_affine_on(((x1, v1[s]), (x2, v2[s]))) for s in range(d + 1)]
        for s, t in pairs:
            ds = lines[s][0] - lines[t][0]
            if ds != 0:
                r = (lines[t][1] - lines[s][1]) / ds
                if a < r < b:
                    roots.add(r)
    pts |= roots

    def label_fn(x):
        return ComparisonLabel(family, d, 1, row_outcomes(values(x), family))

    return _partition_from_points(pts, label_fn, budget)


def level_set_partition(observable) -> IntervalCellPartition:
    """Partition into level sets of a piecewise-constant observable; labels are the values."""
    X = _as_observable(observable)
    if any(p.slope != 0 for p in X.pieces):
        raise InvalidArgumentError("level sets need a piecewise-constant observable")
    return _partition_from_points(set(X.breakpoints), X, DEFAULT_BUDGET)


def binary_partition() -> IntervalCellPartition:
    """``{[0, 1/2], (1/2, 1]}`` labelled 0 and 1."""
    return level_set_partition(PiecewiseLinearMap.from_breakpoints(
        [0, Fraction(1, 2), 1], [(0, 0), (0, 1)]))


def join(*partitions: IntervalCellPartition, budget: int | None = None) -> IntervalCellPartition:
    """Coarsest common refinement; labels are tuples of the input labels."""
    budget = default_budget() if budget is None else budget
    pts = set()
    for p in partitions:
        pts |= p.boundary_points
    return _partition_from_points(pts, lambda x: tuple(p.label_at(x) for p in partitions), budget)


def pullback_refine(cells: IntervalCellPartition, T: PiecewiseLinearMap, t: int,
                    budget: int | None = None) -> IntervalCellPartition:
    """Word partition ``cells v T^{-1} cells v ... v T^{-(t-1)} cells``.

    Cell labels become tuples ``(a_1, ..., a_t)`` of the input labels along
    the orbit; ``t = 1`` returns ``cells`` unchanged.
    """
    if t < 1:
        raise InvalidArgumentError("t must be >= 1")
    if t == 1:
        return cells
    budget = default_budget() if budget is None else budget
    T = T.to_pl()
    seeds = cells.boundary_points | set(T.breakpoints)
    pts = _pullback_points(T, seeds, t - 1, budget)

    def word(x):
        out = []
        for _ in range(t):
            out.append(cells.label_at(x))
            x = T(x)
        return tuple(out)

    return _partition_from_points(pts, word, budget)


def partition_entropy(cells: IntervalCellPartition, precision: int = DEFAULT_PRECISION):
    """``-sum mu ln mu`` over cells, from exact measures, at ``precision`` digits.

    Returns an ``mpmath.mpf``; measure-zero cells contribute nothing.
    """
    with mpmath.workdps(precision):
        h = mpmath.mpf(0)
        for c in cells.positive_cells():
            mu = mpmath.mpf(c.measure.numerator) / c.measure.denominator
            h -= mu * mpmath.log(mu)
        return +h


class ExactRateRow(NamedTuple):
    t: int
    block_entropy: mpmath.mpf
    rate: mpmath.mpf
    increment: mpmath.mpf
    cells: int


def partition_rate_table(cells: IntervalCellPartition, T: PiecewiseLinearMap, t_max: int,
                         precision: int = DEFAULT_PRECISION,
                         budget: int | None = None) -> list[ExactRateRow]:
    """Exact ``H_t``, ``H_t / t`` and ``H_t - H_{t-1}`` of the word partitions of ``cells``."""
    rows = []
    prev = mpmath.mpf(0)
    with mpmath.workdps(precision):
        for t in range(1, t_max + 1):
            refined = pullback_refine(cells, T, t, budget)
            h = partition_entropy(refined, precision)
            rows.append(ExactRateRow(t, h, h / t, h - prev, len(refined)))
            prev = h
    return rows


def entropy_rate_table(T: PiecewiseLinearMap, observable=None, d: int = 1, family: str = "P",
                       t_max: int = 8, precision: int = DEFAULT_PRECISION,
                       budget: int | None = None) -> list[ExactRateRow]:
    """Entropy-rate table of the order-``d`` ordinal partition of ``observable`` under ``T``."""
    base = ordinal_cells(T, observable, d, family, budget)
    return partition_rate_table(base, T, t_max, precision, budget)
