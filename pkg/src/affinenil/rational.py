"""Small helpers for exact rationals: parsing, fractional parts, circle distance."""

from fractions import Fraction
from math import floor


def to_fraction(value):
    """Parse an int, Fraction or "p/q" string into a Fraction.

    Floats are refused: the exact paths never accept rounded input.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"expected int, Fraction or 'p/q' string, got {type(value).__name__}")


def fmt(q):
    """Render a rational as an integer or "p/q" string."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def frac(q):
    """Fractional part q - floor(q), always in [0, 1)."""
    return q - floor(q)


def circle_distance(a, b):
    """Distance on R/Z between two representatives."""
    d = abs(a - b) % 1
    return min(d, 1 - d)
