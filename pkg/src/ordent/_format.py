"""Deterministic number formatting for serialized output."""
from fractions import Fraction


def fmt_float(x) -> float:
    """Round to 12 significant digits so repeated runs serialize identically."""
    return float(f"{float(x):.12g}") + 0.0


def fmt_fraction(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"
