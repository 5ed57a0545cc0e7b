"""Log-domain magnitudes.

Every norm, gain and inequality margin in this package is carried as the
natural log of a nonnegative real.  That keeps quantities like b**m with
m in the hundreds representable: the growth of the catalog systems reaches
2**40 and beyond on default windows, far past what repeated multiplication
in the ordinary domain survives.

Magnitude zero is represented by log value -inf.  An infinite magnitude
(log value +inf) can appear transiently as a gain when a state is mapped
to zero; verifiers treat it as an instantly refuted inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering

NEG_INF = float("-inf")
POS_INF = float("inf")


@total_ordering
@dataclass(frozen=True, slots=True)
class LogMagnitude:
    """A nonnegative real stored as its natural log.

    Multiplication is exact (log addition up to float rounding), addition
    uses a stable log-sum-exp, and comparison follows the underlying
    magnitudes.
    """

    log_value: float

    @classmethod
    def from_value(cls, value: float) -> "LogMagnitude":
        if value < 0:
            raise ValueError(f"magnitude must be nonnegative, got {value}")
        return cls(math.log(value) if value > 0 else NEG_INF)

    @classmethod
    def from_log(cls, log_value: float) -> "LogMagnitude":
        return cls(float(log_value))

    @classmethod
    def zero(cls) -> "LogMagnitude":
        return cls(NEG_INF)

    @classmethod
    def one(cls) -> "LogMagnitude":
        return cls(0.0)

    @property
    def value(self) -> float:
        """Ordinary-domain value; overflows to inf for large logs."""
        try:
            return math.exp(self.log_value)
        except OverflowError:
            return POS_INF

    @property
    def is_zero(self) -> bool:
        return self.log_value == NEG_INF

    @property
    def is_infinite(self) -> bool:
        return self.log_value == POS_INF

    def __mul__(self, other: "LogMagnitude") -> "LogMagnitude":
        return LogMagnitude(self.log_value + other.log_value)

    def __truediv__(self, other: "LogMagnitude") -> "LogMagnitude":
        if other.is_zero:
            if self.is_zero:
                raise ZeroDivisionError("0/0 magnitude is undefined")
            return LogMagnitude(POS_INF)
        if self.is_zero:
            return LogMagnitude(NEG_INF)
        return LogMagnitude(self.log_value - other.log_value)

    def __pow__(self, exponent: float) -> "LogMagnitude":
        if self.is_zero and exponent == 0:
            return LogMagnitude.one()
        return LogMagnitude(self.log_value * exponent)

    def add(self, other: "LogMagnitude") -> "LogMagnitude":
        """Magnitude addition via log-sum-exp; never falls below max(a, b)."""
        return LogMagnitude(log_add(self.log_value, other.log_value))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LogMagnitude):
            return NotImplemented
        return self.log_value == other.log_value

    def __lt__(self, other: "LogMagnitude") -> bool:
        return self.log_value < other.log_value

    def __hash__(self) -> int:
        return hash(self.log_value)

    def __repr__(self) -> str:
        return f"LogMagnitude(log={self.log_value!r})"


def log_add(x: float, y: float) -> float:
    """log(e**x + e**y), stable, with -inf as the additive identity."""
    if x == NEG_INF:
        return y
    if y == NEG_INF:
        return x
    if x == POS_INF or y == POS_INF:
        return POS_INF
    hi, lo = (x, y) if x >= y else (y, x)
    return hi + math.log1p(math.exp(lo - hi))


def log_sub(x: float, y: float) -> float:
    """log(e**x - e**y) when x > y; -inf when the difference is <= 0."""
    if y == NEG_INF:
        return x
    if x <= y:
        return NEG_INF
    if x == POS_INF:
        return POS_INF
    # x + log(1 - e^(y-x)); y - x < 0 so expm1 is safe
    return x + math.log1p(-math.exp(y - x))
