"""Exact-rational text helpers and log2 of big rationals."""
from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import FormatError

_REDUCED = re.compile(r"-?\d+/\d+")
_LOOSE = re.compile(r"-?\d+(/\d+)?")


def format_fraction(x: Fraction) -> str:
    """Always ``p/q`` (``q`` may be 1); Fraction keeps it reduced."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_reduced_fraction(text: str) -> Fraction:
    """Strict file form: ``p/q`` in lowest terms with ``q > 0``."""
    if not isinstance(text, str) or not _REDUCED.fullmatch(text):
        raise FormatError(f"expected a reduced fraction 'p/q', got {text!r}")
    p, q = (int(t) for t in text.split("/"))
    if q == 0:
        raise FormatError(f"zero denominator in {text!r}")
    if math.gcd(p, q) != 1:
        raise FormatError(f"fraction {text!r} is not in lowest terms")
    return Fraction(p, q)


def parse_fraction_arg(text: str) -> Fraction:
    """Command-line form: an integer or ``p/q``; decimals are refused."""
    text = text.strip()
    if not _LOOSE.fullmatch(text):
        raise FormatError(f"expected an integer or 'p/q', got {text!r}")
    if text.endswith("/0"):
        raise FormatError(f"zero denominator in {text!r}")
    return Fraction(text)


def log2_fraction(x: Fraction) -> float:
    # math.log2 handles arbitrarily large ints without overflow.
    return math.log2(x.numerator) - math.log2(x.denominator)
