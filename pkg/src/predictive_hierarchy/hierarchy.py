"""Run probabilities, moments, and the signed binomial transform between them.

With ``r_k = E[(1 - theta)^k]`` and ``mu_j = E[theta^j]``::

    r_k  = sum_j C(k, j) (-1)^j mu_j
    mu_j = sum_l C(j, l) (-1)^l r_l

The matrix ``T[k][j] = C(k, j) (-1)^j`` is triangular with diagonal entries
``(-1)^k`` and is its own inverse.  Everything here is generic over the
number type, so Fraction input gives bit-exact results.
"""

from __future__ import annotations

import math

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import PredictiveError
from .measures import MixingMeasure, moments as measure_moments

MAX_ORDER = 64


@lru_cache(maxsize=None)
def pascal(K: int) -> tuple:
    """Rows 0..K of Pascal's triangle as exact integers."""
    if K > MAX_ORDER:
        raise PredictiveError(f"order {K} exceeds the supported maximum {MAX_ORDER}")
    rows = [(1,)]
    for _ in range(K):
        prev = rows[-1]
        rows.append(tuple(1 if j in (0, len(prev)) else prev[j - 1] + prev[j]
                          for j in range(len(prev) + 1)))
    return tuple(rows)


def transform_matrix(K: int) -> list:
    """``(K+1) x (K+1)`` integer matrix mapping moments to run probabilities."""
    rows = pascal(K)
    return [[rows[k][j] * (-1) ** j if j <= k else 0 for j in range(K + 1)] for k in range(K + 1)]


def _signed_binomial(seq: Sequence) -> list:
    seq = list(seq)
    if not seq:
        raise PredictiveError("sequence must be non-empty")
    if seq[0] != 1:
        raise PredictiveError(f"sequence must start with 1, got {seq[0]!r}")
    rows = pascal(len(seq) - 1)
    if any(isinstance(v, float) for v in seq):
        # compensated summation; the alternating sums cancel heavily
        return [math.fsum((-1) ** j * row[j] * float(seq[j]) for j in range(k + 1))
                for k, row in enumerate(rows)]
    out = []
    for k, row in enumerate(rows):
        acc = seq[0] * 0
        for j in range(k + 1):
            term = row[j] * seq[j]
            acc = acc - term if j % 2 else acc + term
        out.append(acc)
    return out


def runs_from_moments(moments: Sequence) -> list:
    return _signed_binomial(moments)


def moments_from_runs(runs: Sequence) -> list:
    # The transform is an involution, so the inverse has the same form.
    return _signed_binomial(runs)


def default_tol(length: int) -> float:
    return 1e-10 * length


@dataclass(frozen=True)
class CMVerdict:
    """Outcome of a complete-monotonicity screen.

    ``witness`` is ``(m, k, delta)`` where ``delta`` is the raw forward
    difference ``Delta^m mu_k`` whose signed value ``(-1)^m delta`` fell
    below ``-tol``.
    """

    passed: bool
    witness: tuple | None = None
    checked_order: int = 0

    def __bool__(self) -> bool:
        return self.passed


def check_complete_monotonicity(seq: Sequence, max_order: int | None = None,
                                tol=None) -> CMVerdict:
    """Screen a truncated sequence for ``(-1)^m Delta^m mu_k >= 0``.

    Checks every ``(m, k)`` with ``m + k <= min(max_order, len(seq) - 1)``,
    scanning ``m`` then ``k`` in increasing order.  Passing is necessary but
    not sufficient for the sequence to be the moment sequence of a measure on
    [0, 1]; no Hankel-type feasibility test is attempted.

    ``tol`` defaults to 0 for exact (int/Fraction) input and to
    ``1e-10 * len(seq)`` otherwise.
    """
    seq = list(seq)
    if not seq or seq[0] != 1:
        raise PredictiveError("sequence must start with 1")
    if max_order is None:
        max_order = len(seq) - 1
    if max_order < 1:
        raise PredictiveError("max_order must be at least 1")
    if tol is None:
        exact = all(isinstance(v, (int, Fraction)) for v in seq)
        tol = 0 if exact else default_tol(len(seq))
    if tol < 0:
        raise PredictiveError("tol must be nonnegative")
    top = min(max_order, len(seq) - 1)
    row = seq[: top + 1]
    for m in range(top + 1):
        sign = -1 if m % 2 else 1
        for k, delta in enumerate(row):
            if sign * delta < -tol:
                return CMVerdict(False, (m, k, delta), top)
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    return CMVerdict(True, None, top)


@dataclass(frozen=True)
class RoundtripReport:
    K: int
    exact: bool
    max_error: object
    moments: tuple
    runs: tuple
    reconstructed: tuple


def injectivity_roundtrip(measure: MixingMeasure, K: int) -> RoundtripReport:
    """Moments 0..K -> run probabilities -> moments, with the worst error."""
    if K < 1:
        raise PredictiveError("K must be at least 1")
    mu = measure_moments(measure, K)
    r = runs_from_moments(mu)
    back = moments_from_runs(r)
    err = max(abs(x - y) for x, y in zip(mu, back))
    return RoundtripReport(K, bool(measure.exact), err, tuple(mu), tuple(r), tuple(back))
