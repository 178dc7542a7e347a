"""Strict parsing and formatting of rational numbers.

All exact arithmetic in this package uses :class:`fractions.Fraction`
(arbitrary precision, always reduced, positive denominator).  The JSON
interfaces carry rationals as strings of the form ``"p"`` or ``"p/q"`` in
decimal digits with an optional leading ``-``; this module is the single
place that format is enforced.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import SchemaError

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` into a Fraction.

    Rejects decimals, whitespace, and empty/zero denominators so that a
    malformed document fails loudly instead of drifting into floats.
    """
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise SchemaError(f"not a rational string: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError as exc:
        raise SchemaError(f"zero denominator: {text!r}") from exc


def format_rational(value: Fraction) -> str:
    """Format a Fraction as ``"p"`` or ``"p/q"``."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
