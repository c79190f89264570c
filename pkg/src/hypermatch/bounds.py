"""Closed-form probabilities, expectations and bounds for matchings in H(n, M).

Every quantity has two numeric tracks selected by ``exact``:

* ``exact=False`` (default) evaluates in log space and returns a
  :class:`~hypermatch.combinatorics.LogNumber`; this scales to n in the
  hundreds, where terms like ``C(2**n - 1, k)`` overflow any float.
* ``exact=True`` evaluates with big integers and returns a ``Fraction``.

Probability bounds are returned raw and may exceed 1; use
``LogNumber.clamped()`` (or ``min(1, value)``) for presentation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .combinatorics import (
    ONE,
    ZERO,
    LogNumber,
    disjoint_family_count,
    log_binomial,
    log_disjoint_family_count,
    log_sum,
)
from .errors import ParameterError

Number = Union[LogNumber, Fraction]

DEFAULT_DELTA = 0.1
DEFAULT_DENSE_FRACTION = 0.25


def _check_nm(n: int, M: int) -> None:
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if not 1 <= M <= (1 << n) - 1:
        raise ParameterError(f"M must lie in [1, 2^n - 1], got M = {M} for n = {n}")


def match_probability(n: int, n_S: int, k: int, *, exact: bool = False) -> Number:
    """Probability that a fixed k-set of edges is a matching, given support n_S.

    ``sum_j C(n_S, j) S(j, k) / C(2^n - 1, k)``, i.e. the number of disjoint
    k-families over the support divided by the number of k-sets of edges.
    """
    if not 1 <= n_S <= n:
        raise ParameterError(f"need 1 <= n_S <= n, got n_S = {n_S}, n = {n}")
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    N = (1 << n) - 1
    if exact:
        return Fraction(disjoint_family_count(n_S, k), math.comb(N, k))
    return log_disjoint_family_count(n_S, k) / log_binomial(N, k)


@dataclass(frozen=True)
class ExpectationBounds:
    """Lower and upper bound on E[X_k]; ``lower = (M / 2^n) * upper``."""

    lower: Number
    upper: Number


def expected_matchings_bounds(n: int, M: int, k: int, *, exact: bool = False) -> ExpectationBounds:
    _check_nm(n, M)
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    N = (1 << n) - 1
    if exact:
        upper = Fraction(math.comb(M, k) * disjoint_family_count(n, k), math.comb(N, k))
        return ExpectationBounds(Fraction(M, 1 << n) * upper, upper)
    upper = log_binomial(M, k) * log_disjoint_family_count(n, k) / log_binomial(N, k)
    scale = LogNumber(1, math.log(M) - n * math.log(2))
    return ExpectationBounds(scale * upper, upper)


def expected_matchings_exact(n: int, M: int, k: int, *, exact: bool = False) -> Number:
    """E[X_k] under the uniform M-subset model.

    Each of the D(n, k) disjoint k-families lies inside the sampled edge set
    with probability ``C(2^n - 1 - k, M - k) / C(2^n - 1, M)``.
    """
    _check_nm(n, M)
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    N = (1 << n) - 1
    if k > M:
        return Fraction(0) if exact else ZERO
    if exact:
        return Fraction(disjoint_family_count(n, k) * math.comb(N - k, M - k), math.comb(N, M))
    return log_disjoint_family_count(n, k) * log_binomial(N - k, M - k) / log_binomial(N, M)


def markov_no_pair_bound(n: int, M: int, *, exact: bool = False) -> Number:
    """Upper bound on Pr[some two sampled edges are disjoint].

    ``M (M-1) ((3^n + 1)/2 - 2^n) / ((2^n - 1)(2^n - 2))``, which is E[X_2]
    in closed form; by Markov's inequality it bounds Pr[X_2 >= 1].
    """
    if n < 2:
        raise ParameterError(f"n must be >= 2 for two distinct edges, got {n}")
    _check_nm(n, M)
    if M < 2:
        raise ParameterError(f"M must be >= 2, got {M}")
    pairs = (3**n + 1) // 2 - (1 << n)
    num = M * (M - 1) * pairs
    den = ((1 << n) - 1) * ((1 << n) - 2)
    if exact:
        return Fraction(num, den)
    return LogNumber.from_value(M) * (M - 1) * pairs / LogNumber.from_value(den)


def conditional_match_probability_bound(
    n: int, k: int, ell: int, t: int, *, exact: bool = False
) -> Number:
    """Bound on Pr[S_k is a matching | T_k is a matching].

    ``ell`` is the number of shared edges and ``t`` the number of vertices
    they cover.  The value is
    ``sum_{j=1..n-t} C(n-t, j) S(j, k-ell) / C(2^n - k - 1, k - ell)``,
    which is zero when ``ell == k``.
    """
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if not 0 <= ell <= k:
        raise ParameterError(f"need 0 <= ell <= k, got ell = {ell}, k = {k}")
    if t > n:
        raise ParameterError(f"t = {t} exceeds n = {n}")
    if t < ell:
        raise ParameterError(f"shared edges cover at least ell vertices; got t = {t} < ell = {ell}")
    if (1 << n) - k - 1 < k - ell:
        raise ParameterError(f"k = {k} too large for n = {n}")
    den_n = (1 << n) - k - 1
    if exact:
        return Fraction(disjoint_family_count(n - t, k - ell), math.comb(den_n, k - ell))
    return log_disjoint_family_count(n - t, k - ell) / log_binomial(den_n, k - ell)


def _overlap_sum(n: int, f: int, exact: bool) -> Number:
    # sum_{l=2..f} C(f, l) * sum_{j=1..n-l} C(n-l, j) S(j, f-l)
    ells = range(2, f + 1)
    if exact:
        return Fraction(sum(
            math.comb(f, l) * disjoint_family_count(max(n - l, 0), f - l) for l in ells
        ))
    return log_sum(
        log_binomial(f, l) * log_disjoint_family_count(max(n - l, 0), f - l) for l in ells
    )


def _check_f(M: int, f: int) -> None:
    if not 1 <= f <= M:
        raise ParameterError(f"need 1 <= f <= M, got f = {f}, M = {M}")


def variance_upper_bound(n: int, M: int, f: int, *, exact: bool = False) -> Number:
    """Upper bound on Var[X_f]: ``E + E * overlap_sum``.

    E[X_f] is instantiated by the upper expectation bound.
    """
    _check_nm(n, M)
    _check_f(M, f)
    e_up = expected_matchings_bounds(n, M, f, exact=exact).upper
    one = Fraction(1) if exact else ONE
    return e_up * (one + _overlap_sum(n, f, exact))


def chebyshev_ratio(n: int, M: int, f: int, *, exact: bool = False) -> Number:
    """Second-moment bound on Pr[X_f = 0].

    ``1/E + overlap_sum/E`` with E[X_f] instantiated by the lower
    expectation bound, the conservative choice for a denominator.
    """
    _check_nm(n, M)
    _check_f(M, f)
    e_low = expected_matchings_bounds(n, M, f, exact=exact).lower
    one = Fraction(1) if exact else ONE
    return (one + _overlap_sum(n, f, exact)) / e_low


class Regime(str, enum.Enum):
    UNIT = "Unit"
    GAP = "Gap"
    DENSE = "Dense"


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    lower_fn_value: float
    upper_fn_value: float
    delta: float
    dense_fraction: float
    unit_threshold: float


def unit_threshold(n: int) -> float:
    """``exp((n/2)(2 ln 2 - ln 3))``, about ``1.1547**n``.

    Below this many edges the expected number of disjoint edge pairs,
    and with it the matching number above 1, vanishes.
    """
    return math.exp(0.5 * n * (2 * math.log(2) - math.log(3)))


def regime_classify(
    n: int,
    M: int,
    delta: float = DEFAULT_DELTA,
    dense_fraction: float = DEFAULT_DENSE_FRACTION,
) -> RegimeReport:
    """Place (n, M) in the unit, gap or dense regime.

    Unit when ``M < unit_threshold(n)`` (matching number 1); dense when
    ``M >= dense_fraction * 2^n`` (matching number in
    ``[n^(1/2 - delta), n]``); gap otherwise, reported with the trivial
    interval ``[1, n]``.
    """
    if not delta > 0:
        raise ParameterError(f"delta must be > 0, got {delta}")
    if not 0 < dense_fraction <= 1:
        raise ParameterError(f"dense_fraction must lie in (0, 1], got {dense_fraction}")
    _check_nm(n, M)
    threshold = unit_threshold(n)
    if M < threshold:
        return RegimeReport(Regime.UNIT, 1.0, 1.0, delta, dense_fraction, threshold)
    if M >= Fraction(dense_fraction) * (1 << n):
        return RegimeReport(Regime.DENSE, n ** (0.5 - delta), float(n), delta, dense_fraction, threshold)
    return RegimeReport(Regime.GAP, 1.0, float(n), delta, dense_fraction, threshold)
