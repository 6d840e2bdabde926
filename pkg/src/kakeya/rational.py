"""Canonical string form for exact rationals.

Rationals are plain :class:`fractions.Fraction` values throughout the package.
On the wire they are strings ``"num/den"``, or ``"n"`` when the denominator is 1.
"""

from fractions import Fraction
from numbers import Rational

__all__ = ["as_fraction", "format_rational", "parse_rational"]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and canonical strings to a Fraction.

    Floats are refused: a float key would make exact grouping meaningless.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}: {value!r}")


def format_rational(q: Fraction) -> str:
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str):
        raise TypeError(f"rational must be a string, got {type(text).__name__}")
    s = text.strip()
    if not s:
        raise ValueError("empty rational string")
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(n, d)
