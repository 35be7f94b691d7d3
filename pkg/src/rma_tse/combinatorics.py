"""Exact and log-domain scalar arithmetic shared by the enumerator modules.

Counts are plain Python integers (arbitrary precision), ensemble averages are
``fractions.Fraction`` (always in lowest terms), and log-domain quantities are
floats holding natural logarithms with ``NEG_INF`` marking an exact zero.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

__all__ = [
    "BigCount",
    "ExactRatio",
    "LogValue",
    "NEG_INF",
    "DomainError",
    "binomial",
    "log_binomial",
    "binary_entropy",
    "log_sum_exp",
]

# Type aliases documenting the three scalar representations.
BigCount = int
ExactRatio = Fraction
LogValue = float

NEG_INF = float("-inf")

# Inputs this far outside [0, 1] are clamped; farther outside is an error.
_ENTROPY_CLAMP = 1e-12


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


def binomial(n: int, k: int) -> BigCount:
    """Exact C(n, k), returning 0 for any out-of-range arguments.

    The zero convention (k < 0, k > n, or n < 0) lets summation bounds in the
    enumerators be enforced by the coefficients themselves.
    """
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def log_binomial(n: int, k: int) -> LogValue:
    """ln C(n, k) via the log-gamma function; NEG_INF when out of range."""
    if n < 0 or k < 0 or k > n:
        return NEG_INF
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def binary_entropy(x: float) -> float:
    """Binary entropy H(x) = -x ln x - (1-x) ln(1-x), with H(0) = H(1) = 0."""
    if x < 0.0:
        if x < -_ENTROPY_CLAMP:
            raise DomainError(f"binary_entropy argument {x!r} below 0")
        return 0.0
    if x > 1.0:
        if x > 1.0 + _ENTROPY_CLAMP:
            raise DomainError(f"binary_entropy argument {x!r} above 1")
        return 0.0
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log(x) - (1.0 - x) * math.log(1.0 - x)


def log_sum_exp(terms: Iterable[LogValue]) -> LogValue:
    """ln(sum(exp(t))) over ``terms``, summed in the given order.

    The running sum is taken against the maximum term for stability; an empty
    sequence is an empty sum, i.e. NEG_INF.  The summation order is the input
    order, which fixes the result bit-for-bit for identical inputs.
    """
    values = list(terms)
    if not values:
        return NEG_INF
    peak = max(values)
    if peak == NEG_INF:
        return NEG_INF
    acc = 0.0
    for v in values:
        acc += math.exp(v - peak)
    return peak + math.log(acc)
