"""Helpers for exact rationals: parsing, "p/q" serialization, decimal display."""

from __future__ import annotations

from decimal import Context, Decimal
from fractions import Fraction
from typing import Iterable

_DISPLAY = Context(prec=12)


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions, "p/q" strings and decimal strings to Fraction.

    Floats are converted through their shortest repr ("0.1" -> 1/10), which is
    what a user typing ``--eta 0.1`` means.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def to_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def to_strs(values: Iterable) -> list[str]:
    return [to_str(v) for v in values]


def from_strs(values: Iterable[str]) -> list[Fraction]:
    return [Fraction(v) for v in values]


def decimal_str(q) -> str:
    """Render a rational with 12 significant digits (display only)."""
    q = Fraction(q)
    d = _DISPLAY.divide(Decimal(q.numerator), Decimal(q.denominator))
    return format(d, "g") if d != 0 else "0"
