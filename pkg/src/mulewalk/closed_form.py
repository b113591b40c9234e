"""Single-stroke expected walking distance by direct summation.

With exactly ``n_broken`` of ``width`` threads breaking uniformly at random
and the piecer standing at ``pos``, the expected distance of one repair
round splits into four cases: every break at or left of the piecer (d1),
every break at or right (d2), and breaks on both sides taken left-sweep-first
when the left break is the nearer (d3) or right-sweep-first otherwise (d4).
The straddling cases always charge the cheaper sweep order.

The direct sums are the source of truth.  ``closed_form_check`` additionally
evaluates the algebraic closed forms for d1 and d2 and reports whether they
agree with the sums; disagreement is a finding, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .numerics import Number, NumberMode, binomial, binomial_ratio


@dataclass(frozen=True)
class ClosedFormInstance:
    """One table cell: mule width, number of breaks per stroke, start position."""

    width: int
    n_broken: int
    pos: int

    def __post_init__(self):
        if not 1 <= self.n_broken <= self.width:
            raise ValueError(f"need 1 <= n_broken <= width, got {self}")
        if not 0 <= self.pos <= self.width:
            raise ValueError(f"need 0 <= pos <= width, got {self}")


class DeltaBreakdown(NamedTuple):
    d1: Number
    d2: Number
    d3: Number
    d4: Number
    total: Number
    relative: Number


def delta1(inst: ClosedFormInstance, mode: NumberMode = NumberMode.FLOAT) -> Number:
    """Expected distance when all breaks are at or left of the piecer.

    sum over b = n-1 .. pos of b * C(b, n-1) / C(width, n); empty range is 0.
    """
    w, n, pos = inst.width, inst.n_broken, inst.pos
    total = mode.zero()
    for b in range(n - 1, pos + 1):
        if b > 0:
            total += b * binomial_ratio(b, n - 1, w, n, mode)
    return total


def delta2(inst: ClosedFormInstance, mode: NumberMode = NumberMode.FLOAT) -> Number:
    """Mirror of delta1: all breaks at or right of the piecer."""
    w, n, pos = inst.width, inst.n_broken, inst.pos
    total = mode.zero()
    for b in range(n - 1, w - pos):
        if b > 0:
            total += b * binomial_ratio(b, n - 1, w, n, mode)
    return total


def delta3(inst: ClosedFormInstance, mode: NumberMode = NumberMode.FLOAT) -> Number:
    """Straddling breaks with the left one at most as far: piecer walks 2b + b'.

    The double sum over (b, b') with b <= b' and weight C(b+b'-1, n-2)/C(width, n)
    is reindexed by s = b + b'; for fixed s the inner sum of (s + b) over the
    admissible b-range is closed-form, so one cell costs O(width) weight
    evaluations instead of O(pos * width) terms.
    """
    w, n, pos = inst.width, inst.n_broken, inst.pos
    if n < 2:
        return mode.zero()
    total = mode.zero()
    right_max = w - pos - 1
    for s in range(max(2, n - 1), w):
        b_lo = max(1, s - right_max)
        b_hi = min(pos, s // 2)
        if b_lo > b_hi:
            continue
        count = b_hi - b_lo + 1
        coeff = count * s + (b_lo + b_hi) * count // 2
        total += coeff * binomial_ratio(s - 1, n - 2, w, n, mode)
    return total


def delta4(inst: ClosedFormInstance, mode: NumberMode = NumberMode.FLOAT) -> Number:
    """Straddling breaks with the right one strictly nearer: piecer walks b + 2b'.

    Same reindexing as delta3 with b' < b, i.e. b > s/2; the inner sum of
    (2s - b) is closed-form.  The b' range starts at max(1, n-1-b) so that
    patterns whose span is entirely broken (b + b' = n - 1) are included,
    exactly as in delta3.
    """
    w, n, pos = inst.width, inst.n_broken, inst.pos
    if n < 2:
        return mode.zero()
    total = mode.zero()
    right_max = w - pos - 1
    for s in range(max(3, n - 1), w):
        b_lo = max(s // 2 + 1, s - right_max)
        b_hi = min(pos, s - 1)
        if b_lo > b_hi:
            continue
        count = b_hi - b_lo + 1
        coeff = 2 * count * s - (b_lo + b_hi) * count // 2
        total += coeff * binomial_ratio(s - 1, n - 2, w, n, mode)
    return total


def expected_distance(inst: ClosedFormInstance,
                      mode: NumberMode = NumberMode.FLOAT) -> DeltaBreakdown:
    """Total single-stroke expectation and its per-case breakdown."""
    d1 = delta1(inst, mode)
    d2 = delta2(inst, mode)
    d3 = delta3(inst, mode)
    d4 = delta4(inst, mode)
    total = d1 + d2 + d3 + d4
    if mode.is_exact:
        from fractions import Fraction
        relative = total / Fraction(inst.width)
    else:
        relative = total / inst.width
    return DeltaBreakdown(d1, d2, d3, d4, total, relative)


def case_probabilities(inst: ClosedFormInstance,
                       mode: NumberMode = NumberMode.FLOAT):
    """Probability mass of the four walk cases (left, right, straddle<=, straddle>).

    Patterns are classified disjointly: a single break at the piecer's own
    position counts as the left case, so for n = 1 the right-case mass drops
    that one pattern.  Valid for pos <= width - 1 (thread positions).
    """
    w, n, pos = inst.width, inst.n_broken, inst.pos
    left = mode.zero()
    for b in range(n - 1, pos + 1):
        left += binomial_ratio(b, n - 1, w, n, mode)
    right = mode.zero()
    for b in range(n - 1, w - pos):
        right += binomial_ratio(b, n - 1, w, n, mode)
    if n == 1 and 0 <= pos <= w - 1:
        right -= binomial_ratio(w - 1, 0, w, 1, mode)  # break exactly at pos
    right_max = w - pos - 1
    straddle_le = mode.zero()
    straddle_gt = mode.zero()
    for s in range(max(2, n - 1), w):
        weight = binomial_ratio(s - 1, n - 2, w, n, mode) if n >= 2 else mode.zero()
        if weight == 0:
            continue
        b_lo = max(1, s - right_max)
        b_hi = min(pos, s // 2)
        if b_lo <= b_hi:
            straddle_le += (b_hi - b_lo + 1) * weight
        b_lo = max(s // 2 + 1, s - right_max)
        b_hi = min(pos, s - 1)
        if b_lo <= b_hi:
            straddle_gt += (b_hi - b_lo + 1) * weight
    return left, right, straddle_le, straddle_gt


class ClosedFormCheck(NamedTuple):
    d1_sum: Number
    d1_closed: Number
    d1_agrees: bool
    d2_sum: Number
    d2_closed: Number
    d2_agrees: bool


def _delta1_closed(inst: ClosedFormInstance, mode: NumberMode) -> Number:
    w, n, pos = inst.width, inst.n_broken, inst.pos
    if n - 1 > pos + 1:
        return mode.zero()
    coeff = (pos - n + 2) * (n * pos + n - 1)
    ratio = binomial_ratio(pos + 1, n - 1, w, n, mode)
    if mode.is_exact:
        from fractions import Fraction
        return Fraction(coeff, n * (n + 1)) * ratio
    return coeff / (n * (n + 1)) * ratio


def _delta2_closed(inst: ClosedFormInstance, mode: NumberMode) -> Number:
    # Algebraic form as published for the right-hand case, taking the mule
    # width for the symbol a; kept verbatim so the check can report on it.
    w, n, pos = inst.width, inst.n_broken, inst.pos
    if n - 1 > w - pos:
        return mode.zero()
    coeff = (pos + w - n + 1) * (w * n - n * pos - 1)
    ratio = binomial_ratio(w - pos, n - 1, w, n, mode)
    if mode.is_exact:
        from fractions import Fraction
        return Fraction(coeff, n * (n + 1)) * ratio
    return coeff / (n * (n + 1)) * ratio


def _agrees(a: Number, b: Number, mode: NumberMode) -> bool:
    if mode.is_exact:
        return a == b
    if a == b:
        return True
    return abs(a - b) <= 1e-9 * max(abs(a), abs(b), 1.0)


def closed_form_check(inst: ClosedFormInstance,
                      mode: NumberMode = NumberMode.FLOAT) -> ClosedFormCheck:
    """Evaluate the algebraic closed forms for d1/d2 against the direct sums."""
    d1s = delta1(inst, mode)
    d1c = _delta1_closed(inst, mode)
    d2s = delta2(inst, mode)
    d2c = _delta2_closed(inst, mode)
    return ClosedFormCheck(d1s, d1c, _agrees(d1s, d1c, mode),
                           d2s, d2c, _agrees(d2s, d2c, mode))
