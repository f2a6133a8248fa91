""" :mod:`dcshuffle.dtypes.rational`

Exact rational values and their "p/q" text encoding.
"""
from fractions import Fraction
from typing import Union

RationalLike = Union[Fraction, int, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or "p/q" string to a Fraction.

    Floats are rejected: every region computation must stay exact.
    """
    if isinstance(value, bool):
        raise TypeError("Booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return decode_rational(value)
    raise TypeError(f"Cannot use {type(value).__name__} as an exact rational: {value!r}")


def encode_rational(value: RationalLike) -> str:
    """Encode as a canonical "p/q" string (q > 0, gcd(p, q) = 1)."""
    v = as_rational(value)
    return f"{v.numerator}/{v.denominator}"


def decode_rational(text: str) -> Fraction:
    """Decode a "p/q" (or plain integer "p") string."""
    s = text.strip()
    if not s:
        raise ValueError("Empty rational string")
    if "." in s or "e" in s.lower():
        raise ValueError(f"Rational strings must be 'p/q', got {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Invalid rational string {text!r}") from e
