"""Arithmetic over the tropical weight domain Z ∪ {inf}.

Finite weights are 64-bit signed integers. `INF` (a float infinity) is the
absorbing element of addition and neutral for min; it compares correctly
against ints, so built-in ``min`` works on mixed values. Additions are
checked: a finite result outside the 64-bit range raises instead of wrapping.

`NEG_INF` is not part of the weight domain proper; it only appears inside
B-window entries (see the unambiguise module) and is handled there
explicitly, never fed through `w_add`.
"""

from __future__ import annotations

from .errors import InputError, WeightOverflowError

INF = float("inf")
NEG_INF = float("-inf")

I64_MIN = -(2**63)
I64_MAX = 2**63 - 1

Weight = "int | float"  # documentation alias; finite int or INF


def is_finite(w) -> bool:
    return w != INF and w != NEG_INF


def check_weight(w, what="weight"):
    """Validate a stored weight: INF or an in-range finite integer."""
    if w == INF:
        return w
    if isinstance(w, bool) or not isinstance(w, int):
        raise InputError(f"{what} must be an integer or INF, got {w!r}")
    if not I64_MIN <= w <= I64_MAX:
        raise WeightOverflowError(f"{what} {w} outside 64-bit signed range")
    return w


def w_add(a, b):
    """Tropical addition: INF absorbs, finite sums are range-checked."""
    if a == INF or b == INF:
        return INF
    s = a + b
    if not I64_MIN <= s <= I64_MAX:
        raise WeightOverflowError(f"weight addition overflow: {a} + {b}")
    return s


def w_neg(a):
    """Negate a finite weight; INF maps to INF."""
    if a == INF:
        return INF
    n = -a
    if not I64_MIN <= n <= I64_MAX:
        raise WeightOverflowError(f"weight negation overflow: -({a})")
    return n


def fmt_weight(w) -> str:
    return "inf" if w == INF else str(w)


def parse_weight(token: str):
    if token == "inf":
        return INF
    try:
        return int(token)
    except ValueError:
        raise InputError(f"bad weight token {token!r}") from None
