"""Reduction rules: checked implications from one tuple to subgoal tuples.

Each rule validates every hypothesis of its inductive argument exactly and
emits the subgoal list; `enumerate_instances` walks all parameter choices
whose subgoals pass a caller-supplied acceptance predicate.  The rule layer
never decides whether a subgoal "holds" -- acceptance is the caller's.

All delta-window comparisons |delta - X| <= 1 - c/(r-1) are evaluated in
cross-multiplied integer form |N - X(r-1)| <= (r-1) - c, where N is the
integer numerator of delta over the fixed denominator r - 1.

The multiset (n_1, ..., n_m') of twist heights is carried only through its
sum: the subgoal depends on sum_n alone, each n_i is confined to
{2 <= n_i <= r-1, n_i congruent to r-1 mod 2}, and whether a height 2 can
be avoided (forbidden when the subgoal sits on the degree-(r+1) elliptic
boundary) is a function of (m', sum_n).  This collapses an exponential
search to a linear one without changing the reachable subgoal set.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from enum import Enum
from typing import Callable, Iterator, Optional

from .core import Tuple, delta_numerator, is_good
from .erase import erasable_fast, make_collection


class PreconditionViolated(ValueError):
    """A hypothesis of the invoked rule fails; `reason` names the first one."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class NonIntegralBarEll(RuntimeError):
    """(r-1)m' - sum_n came out odd.  Unreachable once the parity
    precondition has passed; kept as an internal assertion."""


class RuleId(Enum):
    MASTER = "master"
    MASTER_111 = "master-111"
    GATHER_LINES = "gather-lines"
    PEEL_ONION = "peel-onion"
    PANCAKE_ONIONS = "pancake-onions"
    TWO_PROJ = "two-proj"
    DELTA_5 = "delta-5"
    M0_DELTA_2 = "m0-delta-2"
    M0_DELTA_35 = "m0-delta-35"
    M0_DELTA_4 = "m0-delta-4"
    MASTER_ERASABLE = "master-erasable"
    DELTA_1_STEP = "delta-1-step"


# search order: cheapest guards first; affects only reported witnesses
RULE_ORDER = (
    RuleId.GATHER_LINES,
    RuleId.PEEL_ONION,
    RuleId.PANCAKE_ONIONS,
    RuleId.M0_DELTA_2,
    RuleId.M0_DELTA_4,
    RuleId.M0_DELTA_35,
    RuleId.TWO_PROJ,
    RuleId.DELTA_5,
    RuleId.DELTA_1_STEP,
    RuleId.MASTER,
    RuleId.MASTER_111,
    RuleId.MASTER_ERASABLE,
)


@dataclass(frozen=True)
class RuleParams:
    """Integer parameters of a rule instance; only the fields the rule
    reads are set."""

    ell_prime: Optional[int] = None
    m_prime: Optional[int] = None
    m_dprime: Optional[int] = None
    d_prime: Optional[int] = None
    g_prime: Optional[int] = None
    eps_in: Optional[int] = None
    eps_out: Optional[int] = None
    sum_n: Optional[int] = None
    any_ni_is_2: bool = False
    eps: Optional[int] = None
    k: Optional[int] = None

    def to_json(self) -> dict:
        doc = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "any_ni_is_2":
                if self.sum_n is not None:
                    doc[f.name] = v
            elif v is not None:
                doc[f.name] = v
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "RuleParams":
        return cls(**doc)


def _need(cond: bool, reason: str) -> None:
    if not cond:
        raise PreconditionViolated(reason)


# ---------------------------------------------------------------------------
# twist-height sums


def _check_sum_n(m_prime: int, sum_n: int, r: int, exclude_2: bool, any2: bool) -> None:
    """Validate that a multiset of m' heights n_i with the stated sum,
    parity, range, and 2-usage exists."""
    if m_prime == 0:
        _need(sum_n == 0, "sum_n nonzero with no twist heights")
        _need(not any2, "any_ni_is_2 set with no twist heights")
        return
    _need(sum_n % 2 == (m_prime * (r - 1)) % 2, "sum_n parity mismatch")
    if r % 2 == 1:  # heights even, from {2, 4, ..., r-1}
        if any2:
            _need(not exclude_2, "height 2 forbidden on the elliptic boundary")
            _need(
                2 + 2 * (m_prime - 1) <= sum_n <= 2 + (r - 1) * (m_prime - 1),
                "sum_n out of range for a multiset containing 2",
            )
        else:
            _need(4 <= r - 1, "no height other than 2 exists")
            _need(
                4 * m_prime <= sum_n <= (r - 1) * m_prime,
                "sum_n out of range for heights >= 4",
            )
    else:  # heights odd, from {3, 5, ..., r-1}
        _need(not any2, "heights are odd, none can be 2")
        _need(
            3 * m_prime <= sum_n <= (r - 1) * m_prime,
            "sum_n out of range for odd heights",
        )


def _sum_choices(
    m_prime: int, r: int, lo: int, hi: int, exclude_2: bool
) -> Iterator[tuple[int, bool]]:
    """Feasible (sum_n, any_ni_is_2) pairs with lo <= sum_n <= hi, in
    ascending order.  The 2-flag is canonical: set only when every
    realizing multiset must contain a height 2."""
    if m_prime == 0:
        if lo <= 0 <= hi:
            yield (0, False)
        return
    n_hi = r - 1
    if r % 2 == 1:
        n_lo = 4 if exclude_2 else 2
    else:
        n_lo = 3
    if n_lo > n_hi:
        return
    par = (m_prime * (r - 1)) % 2
    s = max(lo, m_prime * n_lo)
    if s % 2 != par:
        s += 1
    top = min(hi, m_prime * n_hi)
    while s <= top:
        if r % 2 == 1 and not exclude_2:
            forced_2 = s < 4 * m_prime or 4 > n_hi
            yield (s, forced_2)
        else:
            yield (s, False)
        s += 2


def _bar_ell(ell: int, ell_prime: int, m_prime: int, sum_n: int, r: int) -> int:
    num = (r - 1) * m_prime - sum_n
    if num % 2 != 0:
        raise NonIntegralBarEll(f"(r-1)m' - sum_n = {num} is odd")
    return ell - ell_prime + num // 2


# ---------------------------------------------------------------------------
# the rules


def _apply_master(t: Tuple, p: RuleParams) -> list[Tuple]:
    d, g, r, ell, m = t
    lp, mp, dp, sn = p.ell_prime, p.m_prime, p.d_prime, p.sum_n
    _need(None not in (lp, mp, dp, sn), "missing parameter")
    _need(r >= 3, "r < 3")
    _need(0 <= lp <= ell, "ell' out of range")
    _need(0 <= mp <= m, "m' out of range")
    _need(r != 3 or mp == 0, "m' must be 0 when r = 3")
    _need(2 * mp + lp <= r - 2, "2m' + ell' exceeds r - 2")
    _need(g + r <= dp <= d, "d' out of range")
    if g == 0 and m != 0:
        _need(dp > g + r, "d' must exceed g + r when g = 0 and m > 0")
    _check_sum_n(mp, sn, r, exclude_2=(dp, g) == (r + 1, 1), any2=p.any_ni_is_2)
    lbar = _bar_ell(ell, lp, mp, sn, r)
    _need(lbar >= 0, "ell-bar negative")
    x = lp + 2 * (d - dp) + sn
    _need(abs(delta_numerator(t) - x * (r - 1)) <= r - 2, "delta window missed")
    return [Tuple(dp - 1, g, r - 1, lbar, m - mp)]


def _apply_master_111(t: Tuple, p: RuleParams) -> list[Tuple]:
    d, g, r, ell, m = t
    lp, mp, dp, sn = p.ell_prime, p.m_prime, p.d_prime, p.sum_n
    _need(None not in (lp, mp, dp, sn), "missing parameter")
    _need(r >= 3, "r < 3")
    _need(0 <= lp <= ell, "ell' out of range")
    _need(0 <= mp < m, "m' must be strictly below m")
    _need(r != 3 or mp == 0, "m' must be 0 when r = 3")
    _need(2 * mp + lp < r - 2, "2m' + ell' must be strictly below r - 2")
    _need(g + r <= dp <= d, "d' out of range")
    if g == 0 and m != 0:
        _need(dp > g + r, "d' must exceed g + r when g = 0 and m > 0")
    _check_sum_n(mp, sn, r, exclude_2=(dp, g) == (r + 1, 1), any2=p.any_ni_is_2)
    lbar = _bar_ell(ell, lp, mp, sn, r)
    _need(lbar >= 0, "ell-bar negative")
    x = 1 + lp + 2 * (d - dp) + sn
    _need(abs(delta_numerator(t) - x * (r - 1)) <= r - 2, "delta window missed")
    mbar = m - mp
    return [
        Tuple(dp - 1, g, r - 1, lbar, mbar),
        Tuple(dp - 1, g, r - 1, lbar, mbar - 1),
        Tuple(dp - 2, g, r - 2, lbar, mbar),
    ]


def _apply_master_erasable(t: Tuple, p: RuleParams) -> list[Tuple]:
    d, g, r, ell, m = t
    lp, mp, mpp = p.ell_prime, p.m_prime, p.m_dprime
    dp, gp, ein, eout, sn = p.d_prime, p.g_prime, p.eps_in, p.eps_out, p.sum_n
    _need(None not in (lp, mp, mpp, dp, gp, ein, eout, sn), "missing parameter")
    _need(r >= 3, "r < 3")
    _need(0 <= lp <= ell, "ell' out of range")
    _need(mp >= 0 and mpp >= 0 and mp + mpp <= m, "m' + m'' out of range")
    _need(r != 3 or mp == 0, "m' must be 0 when r = 3")
    _need(0 <= gp <= g, "g' out of range")
    _need(gp + r <= dp <= d - g + gp, "d' out of range")
    if gp == 0 and m != 0:
        _need(dp > gp + r, "d' must exceed g' + r when g' = 0 and m > 0")
    _need(ein >= 0 and eout >= 0, "negative secancy split")
    _need(ein + eout == d - g - dp + gp, "secancy split does not match degree drop")
    _check_sum_n(mp, sn, r, exclude_2=(dp, gp) == (r + 1, 1), any2=p.any_ni_is_2)
    lbar = _bar_ell(ell, lp, mp, sn, r)
    _need(lbar >= 0, "ell-bar negative")
    coll = make_collection(
        s10=lp + m - mp - mpp, s11=eout, s20=mp, s21=g - gp, w10=mpp
    )
    _need(erasable_fast(coll, r), "collection not erasable")
    w = 2 * eout + 3 * (g - gp) + m + mp + lp
    x = 2 * ein + (g - gp) + mpp + lp + w // (r - 1) + sn
    _need(abs(delta_numerator(t) - x * (r - 1)) <= r - 2, "delta window missed")
    return [
        Tuple(dp - 1, gp, r - 1, lbar, mb) for mb in range(m - mp - mpp, m - mp + 1)
    ]


def _apply_gather_lines(t: Tuple, p: RuleParams) -> list[Tuple]:
    d, g, r, ell, m = t
    _need(r >= 3, "r < 3")
    _need(d >= g + 2 * r - 1, "degree below g + 2r - 1")
    return [Tuple(d - (r - 1), g, r, ell, m)]


def _apply_peel_onion(t: Tuple, p: RuleParams) -> list[Tuple]:
    d, g, r, ell, m = t
    _need(r >= 3, "r < 3")
    _need(g >= r, "genus below r")
    _need(is_good(t).is_good, "source tuple not good")
    return [Tuple(d - (r - 1), g - r, r, ell, m + 1)]


def _apply_pancake_onions(t: Tuple, p: RuleParams) -> list[Tuple]:
    d, g, r, ell, m = t
    _need(r >= 3, "r < 3")
    _need(m >= r - 1, "m below r - 1")
    return [Tuple(d, g, r, ell, m - (r - 1))]


def _apply_two_proj(t: Tuple, p: RuleParams) -> list[Tuple]:
    d, g, r, ell, m = t
    eps = p.eps
    _need(eps is not None, "missing parameter")
    _need(r >= 3, "r < 3")
    _need(ell == 0, "ell must be 0")
    _need(m == 1, "m must be 1")
    _need(eps >= 0, "eps negative")
    _need(2 * eps <= d - g - r, "eps exceeds (d - g - r)/2")
    if g == 0:
        _need(2 * eps < d - g - r, "eps must be strictly below (d - g - r)/2 when g = 0")
    x = 2 * eps + 1
    _need(abs(delta_numerator(t) - x * (r - 1)) <= r - 3, "delta window missed")
    return [Tuple(d - 2 * eps - 2, g, r - 2, 0, 1)]


def _apply_delta_5(t: Tuple, p: RuleParams) -> list[Tuple]:
    k = p.k
    _need(k is not None, "missing parameter")
    _need(k >= 3, "k below 3")
    _need(
        t == Tuple(4 * k + 1, 2 * k - 1, 2 * k + 1, 0, 1),
        "tuple is not (4k+1, 2k-1, 2k+1, 0, 1)",
    )
    return [Tuple(4 * k - 3, 2 * k - 2, 2 * k - 1, k - 3, 0)]


def _apply_m0_delta_2(t: Tuple, p: RuleParams) -> list[Tuple]:
    d, g, r, ell, m = t
    _need(r >= 3, "r < 3")
    _need(m == 0, "m must be 0")
    _need(g >= 1, "genus must be positive")
    _need(abs(delta_numerator(t) - 2 * (r - 1)) <= r - 2, "delta window missed")
    return [Tuple(d - 2, g - 1, r - 1, ell + 1, 0)]


def _apply_m0_delta_35(t: Tuple, p: RuleParams) -> list[Tuple]:
    d, g, r, ell, m = t
    eps = p.eps
    _need(eps is not None, "missing parameter")
    _need(m == 0, "m must be 0")
    _need(g >= 3, "genus below 3")
    _need(r >= 6, "r below 6")
    _need(eps >= 0, "eps negative")
    _need(3 * eps <= d - g - r, "eps exceeds (d - g - r)/3")
    x = 2 * eps + 3
    _need(abs(delta_numerator(t) - x * (r - 1)) <= r - 4, "delta window missed")
    return [
        Tuple(d - 3 * eps - 6, g - 3, r - 3, ell + 1, 0),
        Tuple(d - 3 * eps - 6, g - 3, r - 3, ell, 0),
    ]


def _apply_m0_delta_4(t: Tuple, p: RuleParams) -> list[Tuple]:
    d, g, r, ell, m = t
    _need(m == 0, "m must be 0")
    _need(g >= 3, "genus below 3")
    _need(r >= 6, "r below 6")
    _need(abs(delta_numerator(t) - 4 * (r - 1)) <= r - 3, "delta window missed")
    return [
        Tuple(d - 5, g - 3, r - 2, ell + 1, 0),
        Tuple(d - 5, g - 3, r - 2, ell, 0),
    ]


def _apply_delta_1_step(t: Tuple, p: RuleParams) -> list[Tuple]:
    d, g, r, ell, m = t
    _need(r >= 3, "r < 3")
    _need(ell == 0 and m == 0, "ell and m must be 0")
    _need(2 * d + 2 * g == 3 * r - 1, "not on the 2d + 2g = 3r - 1 locus")
    _need(d > g + r, "degree must exceed g + r")
    return [Tuple(d - 3, g, r - 2, 0, 0)]


_APPLY: dict[RuleId, Callable[[Tuple, RuleParams], list[Tuple]]] = {
    RuleId.MASTER: _apply_master,
    RuleId.MASTER_111: _apply_master_111,
    RuleId.MASTER_ERASABLE: _apply_master_erasable,
    RuleId.GATHER_LINES: _apply_gather_lines,
    RuleId.PEEL_ONION: _apply_peel_onion,
    RuleId.PANCAKE_ONIONS: _apply_pancake_onions,
    RuleId.TWO_PROJ: _apply_two_proj,
    RuleId.DELTA_5: _apply_delta_5,
    RuleId.M0_DELTA_2: _apply_m0_delta_2,
    RuleId.M0_DELTA_35: _apply_m0_delta_35,
    RuleId.M0_DELTA_4: _apply_m0_delta_4,
    RuleId.DELTA_1_STEP: _apply_delta_1_step,
}


def apply(rule: RuleId, t: Tuple, p: RuleParams = RuleParams()) -> list[Tuple]:
    """Validate every hypothesis of `rule` at `t` with parameters `p` and
    return the subgoal list; raises PreconditionViolated otherwise."""
    return _APPLY[rule](t, p)


# ---------------------------------------------------------------------------
# instance enumeration


def _enum_simple(rule: RuleId, t: Tuple) -> Iterator[tuple[RuleParams, list[Tuple]]]:
    try:
        goals = _APPLY[rule](t, RuleParams())
    except PreconditionViolated:
        return
    yield RuleParams(), goals


def _enum_two_proj(t: Tuple) -> Iterator[tuple[RuleParams, list[Tuple]]]:
    d, g, r, ell, m = t
    if r < 3 or ell != 0 or m != 1:
        return
    top = d - g - r
    for eps in range(0, top // 2 + 1):
        p = RuleParams(eps=eps)
        try:
            goals = _apply_two_proj(t, p)
        except PreconditionViolated:
            continue
        yield p, goals


def _enum_delta_5(t: Tuple) -> Iterator[tuple[RuleParams, list[Tuple]]]:
    if t.r % 2 == 0 or t.r < 7:
        return
    k = (t.r - 1) // 2
    p = RuleParams(k=k)
    try:
        goals = _apply_delta_5(t, p)
    except PreconditionViolated:
        return
    yield p, goals


def _enum_m0_delta_35(t: Tuple) -> Iterator[tuple[RuleParams, list[Tuple]]]:
    d, g, r, ell, m = t
    if m != 0 or g < 3 or r < 6:
        return
    for eps in range(0, (d - g - r) // 3 + 1):
        p = RuleParams(eps=eps)
        try:
            goals = _apply_m0_delta_35(t, p)
        except PreconditionViolated:
            continue
        yield p, goals


def _master_family_loop(
    t: Tuple, offset: int, strict: bool
) -> Iterator[tuple[int, int, int, int, bool]]:
    """Shared (ell', m', d', sum_n, any2) candidates for the master rules.

    `offset` is the constant added to the window center X; `strict` asks for
    the strict forms m' < m and 2m' + ell' < r - 2.  Candidates come out in
    lexicographic (ell', m', d', sum_n) order; callers re-validate."""
    d, g, r, ell, m = t
    if r < 3:
        return
    n = delta_numerator(t)
    k = r - 1
    cap = r - 2 - (1 if strict else 0)
    m_top = m - 1 if strict else m
    dp_lo = g + r + (1 if (g == 0 and m != 0) else 0)
    x_lo = -((-(n - (r - 2))) // k)  # ceil((N - (r-2)) / (r-1))
    x_hi = (n + (r - 2)) // k
    for lp in range(0, min(ell, cap) + 1):
        mp_top = min(m_top, (cap - lp) // 2)
        if r == 3:
            mp_top = min(mp_top, 0)
        for mp in range(0, mp_top + 1):
            for dp in range(dp_lo, d + 1):
                base = offset + lp + 2 * (d - dp)
                yield from (
                    (lp, mp, dp, sn, any2)
                    for sn, any2 in _sum_choices(
                        mp, r, x_lo - base, x_hi - base, (dp, g) == (r + 1, 1)
                    )
                )


def _enum_master(t: Tuple) -> Iterator[tuple[RuleParams, list[Tuple]]]:
    for lp, mp, dp, sn, any2 in _master_family_loop(t, 0, strict=False):
        p = RuleParams(ell_prime=lp, m_prime=mp, d_prime=dp, sum_n=sn, any_ni_is_2=any2)
        try:
            goals = _apply_master(t, p)
        except PreconditionViolated:
            continue
        yield p, goals


def _enum_master_111(t: Tuple) -> Iterator[tuple[RuleParams, list[Tuple]]]:
    for lp, mp, dp, sn, any2 in _master_family_loop(t, 1, strict=True):
        p = RuleParams(ell_prime=lp, m_prime=mp, d_prime=dp, sum_n=sn, any_ni_is_2=any2)
        try:
            goals = _apply_master_111(t, p)
        except PreconditionViolated:
            continue
        yield p, goals


def _enum_master_erasable(t: Tuple) -> Iterator[tuple[RuleParams, list[Tuple]]]:
    d, g, r, ell, m = t
    if r < 3:
        return
    n = delta_numerator(t)
    k = r - 1
    x_lo = -((-(n - (r - 2))) // k)
    x_hi = (n + (r - 2)) // k
    mp_top = 0 if r == 3 else m
    for lp in range(0, ell + 1):
        for mp in range(0, mp_top + 1):
            for mpp in range(0, m - mp + 1):
                for gp in range(0, g + 1):
                    dp_lo = gp + r + (1 if (gp == 0 and m != 0) else 0)
                    dp_cap = d - g + gp
                    if dp_lo > dp_cap:
                        continue
                    for eout in range(0, dp_cap - dp_lo + 1):
                        coll = make_collection(
                            s10=lp + m - mp - mpp,
                            s11=eout,
                            s20=mp,
                            s21=g - gp,
                            w10=mpp,
                        )
                        if not erasable_fast(coll, r):
                            continue
                        w = 2 * eout + 3 * (g - gp) + m + mp + lp
                        f = w // k
                        for dp in range(dp_lo, dp_cap - eout + 1):
                            ein = d - g - dp + gp - eout
                            base = 2 * ein + (g - gp) + mpp + lp + f
                            for sn, any2 in _sum_choices(
                                mp, r, x_lo - base, x_hi - base, (dp, gp) == (r + 1, 1)
                            ):
                                p = RuleParams(
                                    ell_prime=lp,
                                    m_prime=mp,
                                    m_dprime=mpp,
                                    d_prime=dp,
                                    g_prime=gp,
                                    eps_in=ein,
                                    eps_out=eout,
                                    sum_n=sn,
                                    any_ni_is_2=any2,
                                )
                                try:
                                    goals = _apply_master_erasable(t, p)
                                except PreconditionViolated:
                                    continue
                                yield p, goals


def enumerate_instances(
    rule: RuleId, t: Tuple, accept: Callable[[Tuple], bool] = lambda s: True
) -> Iterator[tuple[RuleParams, list[Tuple]]]:
    """All parameter choices for `rule` at `t` passing the rule's
    preconditions and whose every subgoal satisfies `accept`, in canonical
    (lexicographically sorted parameter) order."""
    if rule is RuleId.MASTER:
        gen = _enum_master(t)
    elif rule is RuleId.MASTER_111:
        gen = _enum_master_111(t)
    elif rule is RuleId.MASTER_ERASABLE:
        gen = _enum_master_erasable(t)
    elif rule is RuleId.TWO_PROJ:
        gen = _enum_two_proj(t)
    elif rule is RuleId.DELTA_5:
        gen = _enum_delta_5(t)
    elif rule is RuleId.M0_DELTA_35:
        gen = _enum_m0_delta_35(t)
    else:
        gen = _enum_simple(rule, t)
    for p, goals in gen:
        if all(accept(s) for s in goals):
            yield p, goals


def first_instance(
    rule: RuleId, t: Tuple, accept: Callable[[Tuple], bool]
) -> Optional[tuple[RuleParams, list[Tuple]]]:
    return next(enumerate_instances(rule, t, accept), None)
