"""Number handling shared by every module.

Values are either binary floats or :class:`fractions.Fraction`.  Comparisons
use an absolute tolerance of ``1e-9`` when any operand is a float and are
exact otherwise, so the same code paths serve both arithmetic modes.
"""

from __future__ import annotations

import math
import re
from decimal import ROUND_HALF_EVEN, ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Union

Number = Union[int, float, Fraction]

TOL = 1e-9

_NUMBER_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")
_RATIO_RE = re.compile(r"^[+-]?\d+/\d+$")


def is_exact(*values: Number) -> bool:
    return not any(isinstance(v, float) for v in values)


def tol(*values: Number) -> float:
    return 0 if is_exact(*values) else TOL


def close(a: Number, b: Number) -> bool:
    return abs(a - b) <= tol(a, b)


def leq(a: Number, b: Number) -> bool:
    return a <= b + tol(a, b)


def lt(a: Number, b: Number) -> bool:
    return a < b - tol(a, b)


def is_finite(x: Number) -> bool:
    return not isinstance(x, float) or math.isfinite(x)


def parse_number(text: str, exact: bool = False) -> Number:
    """Parse a decimal or ``p/q`` literal without consulting the locale.

    Raises ValueError on anything else.
    """
    s = text.strip()
    if _RATIO_RE.match(s):
        value = Fraction(s)
        return value if exact else float(value)
    if not _NUMBER_RE.match(s):
        raise ValueError(f"not a number: {text!r}")
    return Fraction(s) if exact else float(s)


def to_fraction(x: Number) -> Fraction:
    if isinstance(x, float):
        # Shortest repr round-trips, so 0.05 becomes 1/20 rather than its binary expansion.
        return Fraction(repr(x))
    return Fraction(x)


def _terminating(f: Fraction) -> bool:
    d = f.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


def format_full(x: Number) -> str:
    """Full-precision, deterministic rendering of a number."""
    if isinstance(x, float):
        if x == 0:
            return "0"
        if x.is_integer() and abs(x) < 1e16:
            return str(int(x))
        return repr(x)
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    if _terminating(f):
        d = Decimal(f.numerator) / Decimal(f.denominator)
        return format(d.normalize(), "f")
    return f"{f.numerator}/{f.denominator}"


def round_paper(x: Number) -> Decimal:
    """Round half away from zero to one decimal.

    Floats are first snapped to nine decimals so that 1.05 computed as
    ``1 + 0.05`` rounds up like its exact counterpart.
    """
    if isinstance(x, float):
        d = Decimal(x).quantize(Decimal("1e-9"), rounding=ROUND_HALF_EVEN)
    else:
        f = Fraction(x)
        d = Decimal(f.numerator) / Decimal(f.denominator)
    out = d.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)
    if out == 0:
        out = abs(out)
    return out


def format_paper(x: Number) -> str:
    return str(round_paper(x))


def format_number(x: Number, paper: bool = False) -> str:
    return format_paper(x) if paper else format_full(x)


def like(ref: Number, value) -> Number:
    """``value`` in the arithmetic mode of ``ref``: float stays float, else Fraction."""
    return float(value) if isinstance(ref, float) else Fraction(value)


def div(a: Number, b: Number) -> Number:
    """Quotient that stays rational when both operands are (ints included)."""
    return Fraction(a) / b if is_exact(a, b) else a / b
