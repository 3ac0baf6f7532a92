"""Merging independent e-values with U-statistics (product kernel).

The order-n merge of e-values e_1..e_K is the average, over all n-element
subsets, of the product of the selected entries.  Order 1 is the arithmetic
mean; order 2 averages pairwise products.  When the input has fewer than n
entries the order degrades to the input size (the plain product), so every
order is defined for every K >= 1.

Conventions used throughout:
  * e-values live in [0, +inf]; NaN and negatives are rejected,
  * 0 * inf is 0 (a zero e-value annihilates any product),
  * overflow saturates to +inf instead of raising.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import ValidationError


def validate_evalues(values: Iterable[float]) -> tuple[float, ...]:
    """Check a vector of e-values and return it as a tuple of floats."""
    e = tuple(float(v) for v in values)
    if not e:
        raise ValidationError("need at least one e-value")
    for v in e:
        if math.isnan(v):
            raise ValidationError("e-values must not be NaN")
        if v < 0.0:
            raise ValidationError(f"e-values must be nonnegative, got {v!r}")
    return e


def _validate_order(n: int) -> int:
    if int(n) != n or int(n) < 1:
        raise ValidationError(f"order must be a positive integer, got {n!r}")
    return int(n)


def _mul(a: float, b: float) -> float:
    # 0 * inf is defined as 0: a zero e-value annihilates the product.
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def binomial(m: int, k: int) -> float:
    """C(m, k) by the multiplicative formula, in floating point.

    Every partial product is itself a binomial coefficient, so the result
    is exact as long as the intermediates stay below 2**53 (true for all
    sizes this package meets).
    """
    c = 1.0
    for i in range(1, k + 1):
        c = c * (m - k + i) / i
    return c


def elementary_symmetric(values: Sequence[float], up_to: int) -> list[float]:
    """E_0..E_up_to of the multiset: E_i is the sum of all i-subset products."""
    out = [0.0] * (up_to + 1)
    out[0] = 1.0
    for v in values:
        for i in range(up_to, 0, -1):
            out[i] += _mul(v, out[i - 1])
    return out


def u_statistic(values: Iterable[float], order: int) -> float:
    """Order-n merged e-value: E_n / C(K, n), degrading to the full product
    when the input has fewer than n entries."""
    e = validate_evalues(values)
    n = _validate_order(order)
    m = min(n, len(e))
    return elementary_symmetric(e, m)[m] / binomial(len(e), m)


def u2_identity(values: Iterable[float]) -> float:
    """Order-2 merge through the sum-of-squares identity
    ((sum e)^2 - sum e^2) / (K (K - 1)).

    Needs K >= 2.  The input is scaled by its maximum before squaring so the
    identity survives magnitudes near the double-precision overflow limit;
    inputs containing +inf fall back to ``u_statistic`` (the identity's
    subtraction is undefined there).
    """
    e = validate_evalues(values)
    k = len(e)
    if k < 2:
        raise ValidationError("the order-2 identity needs at least two e-values")
    top = max(e)
    if top == 0.0:
        return 0.0
    if math.isinf(top):
        return u_statistic(e, 2)
    scaled = [v / top for v in e]
    s1 = math.fsum(scaled)
    s2 = math.fsum(v * v for v in scaled)
    num = max(s1 * s1 - s2, 0.0) / (k * (k - 1))
    out = num * top * top
    return math.inf if math.isinf(out) else out


def relative_variance(values: Iterable[float]) -> float:
    """Sample variance of the e-values divided by its largest possible value
    (K - 1) * mean^2.  Always in [0, 1]: 0 when all entries coincide, 1 when
    exactly one entry is nonzero.  The all-zero vector maps to 0.
    """
    e = validate_evalues(values)
    k = len(e)
    if k < 2:
        raise ValidationError("relative variance needs at least two e-values")
    for v in e:
        if math.isinf(v):
            raise ValidationError("relative variance is defined for finite e-values")
    top = max(e)
    if top == 0.0:
        return 0.0
    scaled = [v / top for v in e]
    m1 = math.fsum(scaled) / k
    var = math.fsum((v - m1) * (v - m1) for v in scaled) / k
    rv = var / ((k - 1) * m1 * m1)
    return min(max(rv, 0.0), 1.0)


def e_to_p(e: float) -> float:
    """Calibrate an e-value to a p-value: min(1, 1/e), with 0 -> 1, inf -> 0."""
    v = float(e)
    if math.isnan(v) or v < 0.0:
        raise ValidationError(f"e-value must be nonnegative, got {e!r}")
    if v == 0.0:
        return 1.0
    if math.isinf(v):
        return 0.0
    return min(1.0, 1.0 / v)


class UStatAccumulator:
    """Running elementary symmetric polynomials of everything inserted so far.

    Insertion costs O(order); the current merged e-value is E_min(order, m)
    over the matching binomial coefficient.  Accumulators are plain values:
    ``clone`` gives an independent copy sharing nothing.
    """

    __slots__ = ("order", "count", "esp")

    def __init__(self, order: int):
        self.order = _validate_order(order)
        self.count = 0
        self.esp = [0.0] * (self.order + 1)
        self.esp[0] = 1.0

    def insert(self, value: float) -> None:
        v = float(value)
        if math.isnan(v):
            raise ValidationError("e-values must not be NaN")
        if v < 0.0:
            raise ValidationError(f"e-values must be nonnegative, got {value!r}")
        esp = self.esp
        if v != 0.0:
            for i in range(min(self.order, self.count + 1), 0, -1):
                prev = esp[i - 1]
                if prev != 0.0:
                    esp[i] += v * prev
        self.count += 1

    def u_value(self) -> float:
        if self.count == 0:
            raise ValidationError("accumulator is empty")
        m = min(self.order, self.count)
        return self.esp[m] / binomial(self.count, m)

    def clone(self) -> "UStatAccumulator":
        other = UStatAccumulator.__new__(UStatAccumulator)
        other.order = self.order
        other.count = self.count
        other.esp = list(self.esp)
        return other

    def __repr__(self) -> str:  # pragma: no cover
        return f"UStatAccumulator(order={self.order}, count={self.count}, esp={self.esp})"
