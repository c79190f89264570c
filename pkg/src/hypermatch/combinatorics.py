"""Exact and log-space combinatorics.

Exact values are plain Python ints (arbitrary precision).  Quantities too
large for floating point, such as ``C(2**40 - 1, k)``, are carried as
:class:`LogNumber`: a sign plus the natural log of the magnitude.
"""

from __future__ import annotations

import functools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import ParameterError

# Above this many factors, log-binomials fall back to lgamma.
_DIRECT_LOG_TERMS = 256


@functools.total_ordering
@dataclass(frozen=True)
class LogNumber:
    """Real number stored as ``sign * exp(ln_magnitude)``.

    ``sign == 0`` encodes zero; ``ln_magnitude`` is then ignored.
    """

    sign: int
    ln_magnitude: float = 0.0

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ParameterError(f"sign must be -1, 0 or 1, got {self.sign}")
        if self.sign == 0:
            object.__setattr__(self, "ln_magnitude", float("-inf"))

    @classmethod
    def from_value(cls, x) -> "LogNumber":
        """Convert an int, Fraction or float without overflowing."""
        if isinstance(x, LogNumber):
            return x
        if x == 0:
            return ZERO
        sign = 1 if x > 0 else -1
        x = abs(x)
        if isinstance(x, Fraction):
            return cls(sign, math.log(x.numerator) - math.log(x.denominator))
        return cls(sign, math.log(x))

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    @property
    def log10(self) -> float:
        if self.sign == 0:
            return float("-inf")
        return self.ln_magnitude / math.log(10)

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.ln_magnitude)
        except OverflowError:
            return self.sign * math.inf

    def clamped(self) -> float:
        """The value clipped to ``[0, 1]`` for presenting a probability bound."""
        return min(1.0, max(0.0, float(self)))

    def __neg__(self) -> "LogNumber":
        return LogNumber(-self.sign, self.ln_magnitude)

    def __mul__(self, other) -> "LogNumber":
        other = LogNumber.from_value(other)
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return LogNumber(self.sign * other.sign, self.ln_magnitude + other.ln_magnitude)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "LogNumber":
        other = LogNumber.from_value(other)
        if other.sign == 0:
            raise ZeroDivisionError("LogNumber division by zero")
        if self.sign == 0:
            return ZERO
        return LogNumber(self.sign * other.sign, self.ln_magnitude - other.ln_magnitude)

    def __rtruediv__(self, other) -> "LogNumber":
        return LogNumber.from_value(other) / self

    def __add__(self, other) -> "LogNumber":
        other = LogNumber.from_value(other)
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        a, b = (self, other) if self.ln_magnitude >= other.ln_magnitude else (other, self)
        gap = b.ln_magnitude - a.ln_magnitude
        if a.sign == b.sign:
            return LogNumber(a.sign, a.ln_magnitude + math.log1p(math.exp(gap)))
        if gap == 0.0:
            return ZERO
        return LogNumber(a.sign, a.ln_magnitude + math.log1p(-math.exp(gap)))

    __radd__ = __add__

    def __sub__(self, other) -> "LogNumber":
        return self + (-LogNumber.from_value(other))

    def __rsub__(self, other) -> "LogNumber":
        return LogNumber.from_value(other) - self

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogNumber):
            try:
                other = LogNumber.from_value(other)
            except TypeError:
                return NotImplemented
        return self.sign == other.sign and (self.sign == 0 or self.ln_magnitude == other.ln_magnitude)

    def __lt__(self, other) -> bool:
        other = LogNumber.from_value(other)
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign == 0:
            return False
        if self.sign > 0:
            return self.ln_magnitude < other.ln_magnitude
        return self.ln_magnitude > other.ln_magnitude

    def __hash__(self):
        return hash((self.sign, self.ln_magnitude))

    def rel_error(self, exact) -> float:
        """Relative error of this value against an exact int or Fraction."""
        exact = Fraction(exact)
        if exact == 0:
            return 0.0 if self.sign == 0 else math.inf
        ref = LogNumber.from_value(exact)
        if ref.sign != self.sign:
            return math.inf
        return abs(math.expm1(self.ln_magnitude - ref.ln_magnitude))

    def __repr__(self):
        if self.sign == 0:
            return "LogNumber(0)"
        return f"LogNumber({'-' if self.sign < 0 else ''}exp({self.ln_magnitude!r}))"


ZERO = LogNumber(0)
ONE = LogNumber(1, 0.0)


def log_sum(terms: Iterable[LogNumber]) -> LogNumber:
    """Sum of non-negative LogNumbers via a single shifted log-sum-exp."""
    logs = [t.ln_magnitude for t in terms if t.sign != 0]
    if not logs:
        return ZERO
    top = max(logs)
    return LogNumber(1, top + math.log(math.fsum(math.exp(x - top) for x in logs)))


def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0:
        raise ParameterError(f"binomial needs n, k >= 0, got ({n}, {k})")
    return math.comb(n, k)


def log_binomial(n: int, k: int) -> LogNumber:
    """``C(n, k)`` in log space.

    Products with at most a few hundred factors are summed term by term,
    which stays accurate even for astronomically large ``n``; longer ones
    use ``lgamma``.
    """
    if k < 0 or n < 0:
        raise ParameterError(f"binomial needs n, k >= 0, got ({n}, {k})")
    if k > n:
        return ZERO
    k = min(k, n - k)
    if k == 0:
        return ONE
    if k <= _DIRECT_LOG_TERMS:
        num = math.fsum(math.log(n - i) for i in range(k))
        return LogNumber(1, num - math.lgamma(k + 1))
    return LogNumber(1, math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1))


class _StirlingTable:
    """Rows of S(n, k) grown on demand by ``S(n,k) = k S(n-1,k) + S(n-1,k-1)``.

    Exact rows hold ints; log rows hold ``ln S(n, k)`` (``-inf`` for zero).
    Extension is serialized by a lock; finished rows are never mutated.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self.exact: list[list[int]] = [[1]]
        self.logs: list[np.ndarray] = [np.array([0.0])]

    def ensure(self, n: int) -> None:
        if n < len(self.exact):
            return
        with self._lock:
            while len(self.exact) <= n:
                prev = self.exact[-1]
                m = len(prev)
                row = [0] * (m + 1)
                for k in range(1, m + 1):
                    row[k] = k * (prev[k] if k < m else 0) + prev[k - 1]
                lprev = self.logs[-1]
                ks = np.arange(1, m + 1, dtype=float)
                stay = np.append(lprev[1:], -np.inf) + np.log(ks)
                lrow = np.full(m + 1, -np.inf)
                lrow[1:] = np.logaddexp(stay, lprev)
                self.logs.append(lrow)
                self.exact.append(row)


_STIRLING = _StirlingTable()


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind: partitions of an n-set into k blocks."""
    if n < 0 or k < 0:
        raise ParameterError(f"stirling2 needs n, k >= 0, got ({n}, {k})")
    if k > n:
        return 0
    _STIRLING.ensure(n)
    return _STIRLING.exact[n][k]


def log_stirling2(n: int, k: int) -> LogNumber:
    if n < 0 or k < 0:
        raise ParameterError(f"stirling2 needs n, k >= 0, got ({n}, {k})")
    if k > n:
        return ZERO
    _STIRLING.ensure(n)
    value = float(_STIRLING.logs[n][k])
    return ZERO if value == -math.inf else LogNumber(1, value)


def disjoint_family_count(n: int, k: int) -> int:
    """Unordered families of k pairwise-disjoint nonempty subsets of an n-set.

    Computed as ``sum_{j=1..n} C(n, j) S(j, k)``; zero when the sum is empty.
    """
    if n < 0 or k < 0:
        raise ParameterError(f"disjoint_family_count needs n, k >= 0, got ({n}, {k})")
    return sum(math.comb(n, j) * stirling2(j, k) for j in range(max(k, 1), n + 1))


def log_disjoint_family_count(n: int, k: int) -> LogNumber:
    if n < 0 or k < 0:
        raise ParameterError(f"disjoint_family_count needs n, k >= 0, got ({n}, {k})")
    return log_sum(
        log_binomial(n, j) * log_stirling2(j, k) for j in range(max(k, 1), n + 1)
    )
