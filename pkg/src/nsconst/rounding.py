"""Directed rounding to a fixed number of significant digits.

Published bound tables round upper bounds up and lower bounds down on the
third significant digit; the helpers here reproduce that convention exactly
on the binary double given, with no epsilon fudging.
"""

from __future__ import annotations

import math
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal


def round_sig(x: float, digits: int = 3, mode: str = "up") -> float:
    """Round |x| up (mode 'up') or down (mode 'down') to ``digits``
    significant decimal digits; exact on the given double."""
    if x == 0.0 or not math.isfinite(x):
        return x
    if x < 0:
        flipped = {"up": "down", "down": "up"}[mode]
        return -round_sig(-x, digits, flipped)
    d = Decimal(repr(x)) if float(repr(x)) == x else Decimal(x)
    exp = d.adjusted()  # floor(log10 |x|)
    quantum = Decimal(1).scaleb(exp - digits + 1)
    rounding = ROUND_CEILING if mode == "up" else ROUND_FLOOR
    return float(d.quantize(quantum, rounding=rounding))


def sig_str(x: float, digits: int = 3) -> str:
    """Decimal string with exactly ``digits`` significant digits
    (trailing zeros kept, matching published table style)."""
    if x == 0.0:
        return "0"
    s = f"{x:#.{digits}g}"
    if "e" in s or "E" in s:
        mant, _, ex = s.partition("e")
        return f"{mant.rstrip('.')}e{int(ex)}"
    return s.rstrip(".")
