"""Number-mode abstraction and stable combinatorial primitives.

All quantitative routines in this package run in one of two modes:

* ``NumberMode.EXACT`` -- arbitrary-precision rationals (``fractions.Fraction``).
  Results are bit-exact and independent of summation order.
* ``NumberMode.FLOAT`` -- IEEE double precision.  Binomial coefficients and
  their ratios are evaluated as incremental products so that widths up to
  10000 never overflow on the way to a representable result.

The mode is always passed explicitly; there is no global state.
"""

from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from typing import Union

Number = Union[Fraction, float]


class NumberMode(Enum):
    EXACT = "exact"
    FLOAT = "float"

    @property
    def is_exact(self) -> bool:
        return self is NumberMode.EXACT

    def number(self, value) -> Number:
        """Coerce ``value`` (int, Fraction, float or fraction string) to this mode."""
        if self is NumberMode.EXACT:
            return value if isinstance(value, Fraction) else Fraction(value)
        return float(value)

    def zero(self) -> Number:
        return Fraction(0) if self is NumberMode.EXACT else 0.0


def factorial(n: int) -> int:
    """n! as an arbitrary-precision integer; n must be >= 0."""
    if n < 0:
        raise ValueError(f"factorial of negative {n}")
    return math.factorial(n)


def binomial(n: int, k: int, mode: NumberMode = NumberMode.FLOAT) -> Number:
    """C(n, k), with C(n, k) = 0 whenever k < 0 or k > n.

    Summation code relies on out-of-range terms vanishing, hence the
    zero convention instead of an error.  Float mode multiplies the
    min(k, n-k) factor ratios so no intermediate exceeds the result;
    a value beyond float range raises OverflowError rather than
    returning infinity.
    """
    if k < 0 or k > n:
        return mode.zero()
    if mode.is_exact:
        return Fraction(math.comb(n, k))
    m = min(k, n - k)
    result = 1.0
    for i in range(1, m + 1):
        result *= (n - m + i) / i
    if math.isinf(result):
        raise OverflowError(f"C({n},{k}) exceeds float range; use NumberMode.EXACT")
    return result


def binomial_ratio(a: int, b: int, n: int, k: int,
                   mode: NumberMode = NumberMode.FLOAT) -> Number:
    """C(a, b) / C(n, k) for 0 <= b <= a and 0 <= k <= n.

    Float mode pairs numerator and denominator factors so the partial
    product stays near the final magnitude; a self-ratio is exactly 1.0.
    """
    if not (0 <= b <= a):
        raise ValueError(f"binomial_ratio: need 0 <= b <= a, got a={a}, b={b}")
    if not (0 <= k <= n):
        raise ValueError(f"binomial_ratio: need 0 <= k <= n, got n={n}, k={k}")
    if mode.is_exact:
        return Fraction(math.comb(a, b), math.comb(n, k))
    mb = min(b, a - b)
    mk = min(k, n - k)
    common = min(mb, mk)
    result = 1.0
    for i in range(1, common + 1):
        result *= (a - mb + i) / (n - mk + i)
    for i in range(common + 1, mb + 1):
        result *= (a - mb + i) / i
    for i in range(common + 1, mk + 1):
        result *= i / (n - mk + i)
    return result
