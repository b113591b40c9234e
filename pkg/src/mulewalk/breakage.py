"""Thread patterns, breakage summaries and the three breakage distributions.

A *pattern* records fine/broken for every thread position of one stroke.
For the piecer's walk only the leftmost and rightmost broken positions
matter, so patterns are condensed to a *summary*: either ``None`` (nothing
broke) or a ``Span(left, right)``.  Three distributions over summaries are
provided:

* ``fixed_n_distribution`` -- exactly ``n`` threads break, uniformly over
  the C(width, n) patterns;
* ``bernoulli_distribution`` -- every thread breaks independently with
  probability ``p``, aggregated by enumerating all 2**width patterns;
* ``extremes_distribution`` -- the same law written directly on summaries
  in closed form, bypassing the exponential enumeration.

The last two must agree entrywise; the test suite checks this exactly.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

from .numerics import Number, NumberMode, binomial_ratio

FINE = False
BROKEN = True

#: Largest width for which bernoulli_distribution will enumerate 2**width patterns.
BERNOULLI_ENUMERATION_CAP = 20


class Span(NamedTuple):
    """Positions of the leftmost and rightmost broken threads (0-based)."""

    left: int
    right: int


#: A breakage summary is ``None`` (no thread broke) or a ``Span``.
Summary = Optional[Span]


def lbt(pattern: Sequence[bool]) -> int:
    """Index of the leftmost broken thread; requires at least one break."""
    for i, broken in enumerate(pattern):
        if broken:
            return i
    raise ValueError("lbt: no broken thread in pattern")


def rbt(pattern: Sequence[bool]) -> int:
    """Index of the rightmost broken thread; requires at least one break."""
    for i in range(len(pattern) - 1, -1, -1):
        if pattern[i]:
            return i
    raise ValueError("rbt: no broken thread in pattern")


def count_broken(pattern: Sequence[bool]) -> int:
    return sum(1 for broken in pattern if broken)


def summarize(pattern: Sequence[bool]) -> Summary:
    """Condense a pattern to its summary: None if all fine, else Span(lbt, rbt)."""
    if count_broken(pattern) == 0:
        return None
    return Span(lbt(pattern), rbt(pattern))


def _summary_key(s: Summary) -> Tuple[int, int, int]:
    return (0, 0, 0) if s is None else (1, s.left, s.right)


class SummaryDistribution:
    """Finite probability distribution over breakage summaries.

    Entries are canonically ordered (None first, then spans lexicographically),
    zero-probability entries are dropped, and the total mass must be 1
    (exactly in EXACT mode, within 1e-12 in FLOAT mode).
    """

    __slots__ = ("entries", "mode", "width")

    def __init__(self, entries: Iterable[Tuple[Summary, Number]],
                 mode: NumberMode, width: int):
        merged: dict = {}
        for summary, prob in entries:
            if prob < 0 or prob > 1:
                raise ValueError(f"probability {prob} for {summary} outside [0, 1]")
            if summary is not None:
                if not (0 <= summary.left <= summary.right <= width - 1):
                    raise ValueError(f"span {summary} invalid for width {width}")
            merged[summary] = merged.get(summary, mode.zero()) + prob
        ordered = tuple(
            (s, merged[s]) for s in sorted(merged, key=_summary_key) if merged[s] != 0
        )
        total = sum(p for _, p in ordered)
        if mode.is_exact:
            if total != 1:
                raise ValueError(f"probabilities sum to {total}, not 1")
        elif abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        self.entries = ordered
        self.mode = mode
        self.width = width

    def items(self) -> Tuple[Tuple[Summary, Number], ...]:
        return self.entries

    def __getitem__(self, summary: Summary) -> Number:
        for s, p in self.entries:
            if s == summary:
                return p
        raise KeyError(summary)

    def __contains__(self, summary: Summary) -> bool:
        return any(s == summary for s, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SummaryDistribution)
                and self.entries == other.entries
                and self.width == other.width)

    def __repr__(self) -> str:
        return f"SummaryDistribution(width={self.width}, entries={self.entries!r})"


def fixed_n_distribution(width: int, n: int, mode: NumberMode = NumberMode.FLOAT,
                         method: str = "closed") -> SummaryDistribution:
    """Summary distribution when exactly ``n`` of ``width`` threads break.

    ``method="closed"`` uses P(Span(l, r)) = C(r-l-1, n-2) / C(width, n)
    (and 1/width for n = 1); ``method="enumerate"`` averages over all
    C(width, n) patterns.  Both must agree.
    """
    if not (1 <= n <= width):
        raise ValueError(f"fixed_n_distribution: need 1 <= n <= width, got n={n}, width={width}")
    entries: list = []
    if method == "closed":
        if n == 1:
            p = binomial_ratio(1, 0, width, 1, mode)  # 1/width
            entries = [(Span(k, k), p) for k in range(width)]
        else:
            for left in range(width):
                for right in range(left + n - 1, width):
                    entries.append(
                        (Span(left, right),
                         binomial_ratio(right - left - 1, n - 2, width, n, mode)))
    elif method == "enumerate":
        from itertools import combinations
        weight = (Fraction(1, comb(width, n)) if mode.is_exact
                  else 1.0 / comb(width, n))
        for positions in combinations(range(width), n):
            entries.append((Span(positions[0], positions[-1]), weight))
    else:
        raise ValueError(f"unknown method {method!r}")
    return SummaryDistribution(entries, mode, width)


def bernoulli_distribution(width: int, p, mode: NumberMode = NumberMode.FLOAT,
                           enumeration_cap: int = BERNOULLI_ENUMERATION_CAP
                           ) -> SummaryDistribution:
    """Summary distribution when each thread breaks independently with probability p.

    Enumerates every one of the 2**width patterns, weighting a pattern with
    b broken threads by p**b * (1-p)**(width-b).  Widths above the cap are
    rejected; use extremes_distribution for wide mules.
    """
    if width > enumeration_cap:
        raise ValueError(
            f"bernoulli_distribution: width {width} exceeds the enumeration cap "
            f"{enumeration_cap} (2**width patterns); use extremes_distribution instead")
    if width < 1:
        raise ValueError("bernoulli_distribution: width must be >= 1")
    p = mode.number(p)
    if not 0 <= p <= 1:
        raise ValueError(f"probability {p} outside [0, 1]")
    q = 1 - p
    p_pow = [mode.number(1)]
    q_pow = [mode.number(1)]
    for _ in range(width):
        p_pow.append(p_pow[-1] * p)
        q_pow.append(q_pow[-1] * q)
    masses: dict = {}
    for bits in range(1 << width):
        if bits == 0:
            summary: Summary = None
            broken = 0
        else:
            broken = bits.bit_count()
            # bit i of the mask is thread position i
            summary = Span((bits & -bits).bit_length() - 1, bits.bit_length() - 1)
        weight = p_pow[broken] * q_pow[width - broken]
        if weight != 0:
            masses[summary] = masses.get(summary, mode.zero()) + weight
    return SummaryDistribution(masses.items(), mode, width)


def extremes_distribution(width: int, p,
                          mode: NumberMode = NumberMode.FLOAT) -> SummaryDistribution:
    """Closed-form summary distribution for independent breakage.

    P(None)        = (1-p)**width
    P(Span(l, l))  = (1-p)**(width-1) * p
    P(Span(l, r))  = (1-p)**(l + width-1-r) * p**2      for l < r

    The exponent in the two-or-more case counts the threads outside the
    span (left of l plus right of r) that must all be fine; threads strictly
    between l and r are unconstrained.  Equality with bernoulli_distribution
    is the correctness criterion.
    """
    if width < 1:
        raise ValueError("extremes_distribution: width must be >= 1")
    p = mode.number(p)
    if not 0 <= p <= 1:
        raise ValueError(f"probability {p} outside [0, 1]")
    q = 1 - p
    q_pow = [mode.number(1)]
    for _ in range(width):
        q_pow.append(q_pow[-1] * q)
    entries: list = [(None, q_pow[width])]
    single = q_pow[width - 1] * p
    for k in range(width):
        entries.append((Span(k, k), single))
    p2 = p * p
    for left in range(width):
        for right in range(left + 1, width):
            entries.append((Span(left, right), q_pow[left + width - 1 - right] * p2))
    return SummaryDistribution(entries, mode, width)


def reflect_summary(s: Summary, width: int) -> Summary:
    """Mirror a summary through the centre of the mule."""
    if s is None:
        return None
    return Span(width - 1 - s.right, width - 1 - s.left)
