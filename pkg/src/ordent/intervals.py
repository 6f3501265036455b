"""Rational intervals with explicit endpoint membership."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ._errors import InvalidArgumentError

__all__ = ["Interval", "intersect", "merge_adjacent", "parse_interval", "as_fraction"]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True, order=True)
class Interval:
    """Interval with rational endpoints; a point is ``Interval(a, a, True, True)``."""

    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed)):
            raise InvalidArgumentError(f"empty interval {self._text()}")

    @classmethod
    def point(cls, a) -> "Interval":
        return cls(a, a, True, True)

    @classmethod
    def open(cls, a, b) -> "Interval":
        return cls(a, b, False, False)

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def _text(self) -> str:
        if self.lo == self.hi:
            return f"{{{self.lo}}}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo},{self.hi}{right}"

    def __str__(self):
        return self._text()


def parse_interval(text: str) -> Interval:
    """Parse ``"[0,1/3]"``, ``"(1/3,2/3]"`` or ``"{1/2}"``."""
    s = text.strip()
    try:
        if s.startswith("{") and s.endswith("}"):
            return Interval.point(Fraction(s[1:-1]))
        lo_closed = s[0] == "["
        hi_closed = s[-1] == "]"
        if s[0] not in "[(" or s[-1] not in "])":
            raise ValueError
        lo, hi = s[1:-1].split(",")
        return Interval(Fraction(lo.strip()), Fraction(hi.strip()), lo_closed, hi_closed)
    except (ValueError, ZeroDivisionError, IndexError) as exc:
        raise InvalidArgumentError(f"cannot parse interval {text!r}") from exc


def intersect(a: Interval, b: Interval) -> Interval | None:
    if a.lo > b.lo or (a.lo == b.lo and not a.lo_closed):
        lo, lo_closed = a.lo, a.lo_closed
    else:
        lo, lo_closed = b.lo, b.lo_closed
    if a.hi < b.hi or (a.hi == b.hi and not a.hi_closed):
        hi, hi_closed = a.hi, a.hi_closed
    else:
        hi, hi_closed = b.hi, b.hi_closed
    if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
        return None
    return Interval(lo, hi, lo_closed, hi_closed)


def _touch(a: Interval, b: Interval) -> bool:
    """True when ``a`` is immediately followed by ``b`` with no gap or overlap."""
    return a.hi == b.lo and (a.hi_closed != b.lo_closed)


def merge_adjacent(intervals: Iterable[Interval]) -> list[Interval]:
    """Sort and fuse intervals that abut without a gap."""
    out: list[Interval] = []
    for iv in sorted(intervals, key=lambda i: (i.lo, not i.lo_closed, i.hi)):
        if out and _touch(out[-1], iv):
            prev = out.pop()
            iv = Interval(prev.lo, iv.hi, prev.lo_closed, iv.hi_closed)
        out.append(iv)
    return out
