"""Helpers for moving between exact rationals and floats."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = ["as_rational", "as_number", "as_exponent", "is_exact", "fmt", "ExactLike"]

ExactLike = "int | Fraction | float | str"


def as_rational(x) -> Fraction:
    """Convert ``x`` to a Fraction.

    Floats go through their shortest decimal repr, so ``0.1`` becomes
    ``1/10`` rather than the nearest binary fraction. Strings accept
    ``"p/q"`` and decimal notation.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(repr(float(x)))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as a rational")


def as_number(x):
    """Like :func:`as_rational` but floats stay floats."""
    if isinstance(x, float):
        return float(x)
    return as_rational(x)


def as_exponent(p):
    """Exponent as int when integral, so ``Fraction ** p`` stays exact."""
    p = as_number(p)
    if isinstance(p, Fraction) and p.denominator == 1:
        return int(p)
    if isinstance(p, float) and p.is_integer():
        return int(p)
    return p


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def fmt(x) -> str:
    """Format for CSV output: rationals as ``p/q``, floats as shortest repr."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return repr(float(x))
    if x is None:
        return ""
    return str(x)
