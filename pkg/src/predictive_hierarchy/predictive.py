"""k-step predictives under a posterior mixing measure.

The Bayes predictive of a pattern with ``s`` ones among ``k`` future bits is
``E[theta^s (1 - theta)^(k - s)]``; the plug-in predictive replaces the
posterior by a point mass at its mean.  For Beta posteriors the expectation
goes through the rising-factorial formula, for discrete ones through direct
summation, so both are exact in rational mode.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from . import rng as _rng
from .errors import InvalidBracket, PredictiveError
from .measures import (Discrete, MixingMeasure, PointMass, _resolve_mode, coerce,
                       mean_variance, two_point_with_mean)

MAX_ENUMERATION_K = 30


@dataclass(frozen=True)
class Pattern:
    bits: tuple

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise PredictiveError("pattern must have at least one bit")
        if any(b not in (0, 1) for b in bits):
            raise PredictiveError("pattern bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, value: Union[str, Sequence[int], "Pattern"]) -> "Pattern":
        if isinstance(value, Pattern):
            return value
        if isinstance(value, str):
            return cls(tuple(int(c) for c in value.replace(",", "").strip()))
        return cls(tuple(value))

    @property
    def k(self) -> int:
        return len(self.bits)

    @property
    def s(self) -> int:
        return sum(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


def all_patterns(k: int) -> Iterator[Pattern]:
    if not 1 <= k <= MAX_ENUMERATION_K:
        raise PredictiveError(f"enumeration limited to 1 <= k <= {MAX_ENUMERATION_K}")
    for bits in itertools.product((0, 1), repeat=k):
        yield Pattern(bits)


def pattern_prob(posterior: MixingMeasure, pattern) -> object:
    pattern = Pattern.parse(pattern)
    return posterior.mixed_moment(pattern.s, pattern.k - pattern.s)


def run_prob(posterior: MixingMeasure, k: int) -> object:
    """Probability that the next ``k`` observations are all zero."""
    if k < 1:
        raise PredictiveError("horizon must be at least 1")
    return posterior.mixed_moment(0, k)


def plugin_run_prob(posterior: MixingMeasure, k: int) -> object:
    m, _ = mean_variance(posterior)
    return (1 - m) ** k


@dataclass(frozen=True)
class GapReport:
    k: int
    bayes: object
    plugin: object
    gap: object
    upper_bound: object
    variance: object

    @property
    def within_bound(self) -> bool:
        return 0 <= self.gap <= self.upper_bound


def gap_report(posterior: MixingMeasure, k: int) -> GapReport:
    """Bayes minus plug-in run probability, with the ``k(k-1)/2 * var`` bound.

    ``k = 1`` is accepted and always gives a zero gap.
    """
    if k < 1:
        raise PredictiveError("horizon must be at least 1")
    m, var = mean_variance(posterior)
    bayes = run_prob(posterior, k)
    plugin = (1 - m) ** k
    gap = bayes - plugin
    bound = Fraction(k * (k - 1), 2) * var if posterior.exact else k * (k - 1) / 2 * var
    slack = 0 if posterior.exact else 1e-12
    if not (-slack <= gap <= bound + slack):
        raise ArithmeticError(f"gap {gap} violates 0 <= gap <= {bound}")
    return GapReport(k, bayes, plugin, gap, bound, var)


def predictive_range(m, k: int, *, exact: bool | None = None) -> tuple:
    """Interval of k-step run probabilities over all measures with mean ``m``.

    The lower end ``(1-m)^k`` is attained by the point mass at ``m`` and the
    upper end ``1-m`` by ``(1-m) delta_0 + m delta_1``.
    """
    exact = _resolve_mode(exact, m)
    m = coerce(m, exact)
    if not 0 < m < 1:
        raise PredictiveError("mean must lie strictly inside (0, 1)")
    if k < 2:
        raise PredictiveError("horizon must be at least 2")
    return (1 - m) ** k, 1 - m


def range_endpoint_measures(m, *, exact: bool | None = None) -> tuple:
    exact = _resolve_mode(exact, m)
    m = coerce(m, exact)
    return PointMass(m, exact=exact), two_point_with_mean(0, 1, m, exact=exact)


# -- non-identification witnesses -------------------------------------------

@dataclass(frozen=True)
class Power:
    """``(1 - theta)^k``, or ``theta^k`` with ``ones=True``."""

    k: int
    ones: bool = False

    def __post_init__(self) -> None:
        if self.k < 2:
            raise PredictiveError("power functional needs k >= 2")

    def __call__(self, theta):
        return theta**self.k if self.ones else (1 - theta) ** self.k


@dataclass(frozen=True)
class Indicator:
    """``1[theta <= t]``."""

    t: object

    def __call__(self, theta):
        return 1 if theta <= self.t else 0


@dataclass(frozen=True)
class Entropy:
    """Bernoulli entropy in nats, with ``0 log 0 = 0``."""

    def __call__(self, theta):
        x = float(theta)
        return -sum(p * math.log(p) for p in (x, 1.0 - x) if p > 0)


def expect(measure: MixingMeasure, f) -> object:
    if isinstance(measure, PointMass):
        return f(measure.location)
    if isinstance(measure, Discrete):
        return sum(w * f(x) for x, w in measure.atoms)
    raise PredictiveError("expectation of a general functional needs a point or discrete measure")


@dataclass(frozen=True)
class Witness:
    point: PointMass
    spread: Discrete
    point_value: object
    spread_value: object

    @property
    def differs(self) -> bool:
        return self.point_value != self.spread_value


def nonid_witness(m, functional, bracket: tuple, *, exact: bool | None = None) -> Witness:
    """Two measures with mean ``m`` that disagree on ``E[functional]``.

    ``functional`` is a :class:`Power`, :class:`Indicator`, :class:`Entropy`
    or any callable on [0, 1].  The bracket ``(a, b)`` must satisfy
    ``0 < a < m < b < 1`` except that the closed endpoints 0 and 1 are
    allowed, which gives the extreme two-point measure.
    """
    a, b = bracket
    exact = _resolve_mode(exact, m, a, b)
    m, a, b = (coerce(v, exact) for v in (m, a, b))
    if not (0 <= a < m < b <= 1):
        raise InvalidBracket(f"need a < m < b in [0, 1], got a={a}, m={m}, b={b}")
    point = PointMass(m, exact=exact)
    spread = two_point_with_mean(a, b, m, exact=exact)
    return Witness(point, spread, expect(point, functional), expect(spread, functional))


# -- Monte Carlo cross-check -------------------------------------------------

@dataclass(frozen=True)
class MonteCarloCheck:
    exact: float
    estimate: float
    se: float
    replications: int

    @property
    def z(self) -> float:
        return (self.estimate - self.exact) / self.se if self.se > 0 else 0.0

    @property
    def passed(self) -> bool:
        return abs(self.estimate - self.exact) <= 3 * self.se


def simulate_blocks(posterior: MixingMeasure, k: int, replications: int, seed: int,
                    tag="pattern-mc") -> Iterable[np.ndarray]:
    """Conditionally i.i.d. future blocks: draw theta, then ``k`` Bernoulli bits."""
    for gen, size in _rng.blocks(seed, tag, replications):
        theta = posterior.sample(gen, size)
        yield (gen.random((size, k)) < theta[:, None]).astype(np.int8)


def mc_pattern_check(posterior: MixingMeasure, pattern, replications: int, seed: int) -> MonteCarloCheck:
    pattern = Pattern.parse(pattern)
    target = np.array(pattern.bits, dtype=np.int8)
    hits = 0
    for block in simulate_blocks(posterior, pattern.k, replications, seed):
        hits += int(np.all(block == target, axis=1).sum())
    p = float(pattern_prob(posterior, pattern))
    se = math.sqrt(p * (1 - p) / replications)
    return MonteCarloCheck(p, hits / replications, se, replications)
