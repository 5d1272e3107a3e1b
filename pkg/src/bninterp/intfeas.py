"""Integer feasibility over systems of rational interval bounds.

One variable, box constraints only: given lower bounds a_i/b_i and upper
bounds c_j/d_j, decide whether an integer fits between all of them
(`integer_in_interval`, the exact oracle) and evaluate the sufficient
criterion that forgives rounding (`eliminate_sufficient`).

The sufficient criterion is presentation-dependent: its correction term
(b_i - 1)(d_j - 1) / (b_i d_j) reads the denominators as written, so bounds
are carried as unreduced (numerator, denominator) pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional


class Bound(NamedTuple):
    num: int
    den: int  # >= 1; deliberately not reduced

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)


@dataclass(frozen=True)
class BoundSystem:
    lowers: tuple[Bound, ...] = ()
    uppers: tuple[Bound, ...] = ()

    def __post_init__(self):
        for b in (*self.lowers, *self.uppers):
            if b.den < 1:
                raise ValueError(f"denominators must be >= 1, got {b}")


def system(lowers=(), uppers=()) -> BoundSystem:
    """Convenience constructor from (num, den) pairs."""
    return BoundSystem(
        tuple(Bound(*p) for p in lowers), tuple(Bound(*p) for p in uppers)
    )


def integer_in_interval(s: BoundSystem) -> Optional[int]:
    """The least integer n with n >= every lower and n <= every upper, or None.

    Exact: ceil of the max lower against floor of the min upper.  A side
    with no bounds is vacuous; with both sides empty, 0 is returned.
    """
    lo = max((b.value for b in s.lowers), default=None)
    hi = min((b.value for b in s.uppers), default=None)
    if lo is None and hi is None:
        return 0
    if lo is None:
        return math.floor(hi)
    n = math.ceil(lo)
    if hi is not None and n > math.floor(hi):
        return None
    return n


def eliminate_sufficient(s: BoundSystem) -> bool:
    """Sufficient condition for an integer to fit in the interval system.

    True iff a_i/b_i <= c_j/d_j - (b_i - 1)(d_j - 1)/(b_i d_j) for every
    pair of a lower and an upper bound; vacuously true when either list is
    empty.  Sufficient but not necessary for `integer_in_interval`.
    """
    for a, b in s.lowers:
        for c, d in s.uppers:
            if Fraction(a, b) > Fraction(c, d) - Fraction((b - 1) * (d - 1), b * d):
                return False
    return True
