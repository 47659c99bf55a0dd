"""Exact rational helpers shared by every solver.

All solver inputs and outputs are :class:`fractions.Fraction`.  Floats are
rejected on the way in so that ``0.1`` can never silently become
``3602879701896397/36028797018963968``.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable

__all__ = ["Fraction", "as_fraction", "fraction_str", "common_denominator"]


def as_fraction(value) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Accepts ints, Fractions, and strings such as ``"9/10"``, ``"-3"`` or
    ``"0.25"``.  Floats raise ``TypeError``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty number")
        return Fraction(text)
    if isinstance(value, float):
        raise TypeError(f"float {value!r} is not exact; write it as a string")
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def fraction_str(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def common_denominator(values: Iterable[Fraction]) -> int:
    d = 1
    for v in values:
        d = lcm(d, Fraction(v).denominator)
    return d
