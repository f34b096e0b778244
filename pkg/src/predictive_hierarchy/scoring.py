"""Bernoulli KL geometry and scoring-rule regrets.

All logarithms are natural, so divergences and regrets are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, PredictiveError
from .measures import Beta, Discrete, MixingMeasure


def _xlogy_ratio(x: float, y: float) -> float:
    # x * log(x / y) with 0 log 0 = 0
    if x == 0:
        return 0.0
    return x * math.log(x / y)


def bernoulli_kl(p: float, q: float) -> float:
    """D(Bern(p) || Bern(q)).

    Raises :class:`DomainError` when absolute continuity fails (``q`` at an
    endpoint that ``p`` does not share).  Use :func:`kl_or_inf` in sweeps.
    """
    p, q = float(p), float(q)
    if not (0 <= p <= 1 and 0 <= q <= 1):
        raise DomainError(f"probabilities must lie in [0, 1], got p={p}, q={q}")
    if (q == 0 and p > 0) or (q == 1 and p < 1):
        raise DomainError(f"KL is infinite: q={q} does not dominate p={p}")
    return max(_xlogy_ratio(p, q) + _xlogy_ratio(1 - p, 1 - q), 0.0)


def kl_or_inf(p: float, q: float) -> float:
    try:
        return bernoulli_kl(p, q)
    except DomainError:
        if 0 <= p <= 1 and 0 <= q <= 1:
            return math.inf
        raise


def fisher_info(theta: float) -> float:
    theta = float(theta)
    if not 0 < theta < 1:
        raise DomainError(f"Fisher information needs theta in (0, 1), got {theta}")
    return 1.0 / (theta * (1.0 - theta))


@dataclass(frozen=True)
class QuadraticError:
    exact: float
    approx: float
    error: float


def kl_quadratic_error(L: float, theta: float) -> QuadraticError:
    """Compare D(L || theta) with its Fisher quadratic ``(theta-L)^2 I(L) / 2``."""
    L, theta = float(L), float(theta)
    if not (0 < L < 1 and 0 < theta < 1):
        raise DomainError("both arguments must lie in (0, 1)")
    exact = bernoulli_kl(L, theta)
    approx = (theta - L) ** 2 * fisher_info(L) / 2
    return QuadraticError(exact, approx, exact - approx)


@dataclass(frozen=True)
class KlProfile:
    center: float
    theta: np.ndarray
    rate: np.ndarray
    quadratic: np.ndarray


def kl_profile(center: float, grid: Sequence[float]) -> KlProfile:
    """Sanov rate and its quadratic approximation over a grid.

    Cells where the rate is infinite hold ``inf`` rather than raising.
    """
    info = fisher_info(center)
    theta = np.asarray(grid, dtype=float)
    rate = np.array([kl_or_inf(center, t) for t in theta])
    quad = (theta - center) ** 2 * info / 2
    return KlProfile(float(center), theta, rate, quad)


def _trapezoid(y: np.ndarray, x: np.ndarray) -> float:
    return float(np.sum((y[1:] + y[:-1]) * np.diff(x)) / 2)


def sanov_posterior_density(prior: MixingMeasure, n: int, L: float, grid=None) -> np.ndarray:
    """Posterior proportional to ``exp(-n D(L || theta)) * prior``.

    For a Beta prior the result is a density on ``grid`` normalized by the
    trapezoid rule.  For a discrete prior the grid is ignored and the result
    holds the posterior weights of the atoms, in atom order.  ``n * L`` must
    be an integer (it is the success count).
    """
    L = float(L)
    if n < 0:
        raise PredictiveError("n must be nonnegative")
    if not 0 <= L <= 1:
        raise DomainError("L must lie in [0, 1]")
    if n and abs(n * L - round(n * L)) > 1e-9:
        raise DomainError(f"n * L = {n * L} is not an integer")

    if isinstance(prior, Discrete):
        locs = np.array([float(x) for x in prior.locations])
        logw = np.log(np.array([float(w) for w in prior.weights]))
        rate = np.array([kl_or_inf(L, t) for t in locs]) if n else np.zeros_like(locs)
        logpost = logw - n * rate
        if not np.isfinite(logpost).any():
            raise DomainError("every atom has zero posterior weight")
        w = np.exp(logpost - logpost.max())
        return w / w.sum()

    if not isinstance(prior, Beta):
        raise PredictiveError("Sanov posterior needs a Beta or discrete prior")
    if grid is None:
        raise PredictiveError("a grid is required for a Beta prior")
    theta = np.asarray(grid, dtype=float)
    if theta.ndim != 1 or theta.size < 2 or np.any(np.diff(theta) <= 0):
        raise PredictiveError("grid must be strictly increasing with at least two points")
    if np.any((theta < 0) | (theta > 1)):
        raise DomainError("grid must lie in [0, 1]")
    rate = np.array([kl_or_inf(L, t) for t in theta]) if n else np.zeros_like(theta)
    with np.errstate(invalid="ignore"):
        logpost = prior.log_density(theta) - n * rate
    # zero likelihood beats an infinite prior density at the same endpoint
    logpost = np.where(np.isinf(rate), -np.inf, logpost)
    if not np.all(np.isfinite(logpost) | (logpost == -np.inf)):
        raise DomainError("density is infinite on the grid; use an interior grid")
    dens = np.exp(logpost - np.max(logpost))
    return dens / _trapezoid(dens, theta)


# -- scoring rules -----------------------------------------------------------

def log_score_regret(p_bayes: float, p_plugin: float) -> float:
    """Expected log-score excess of the plug-in over the Bayes forecast.

    Equal to the KL divergence from Bern(p_bayes) to Bern(p_plugin).
    """
    p_bayes, p_plugin = float(p_bayes), float(p_plugin)
    if not (0 < p_bayes < 1 and 0 < p_plugin < 1):
        raise DomainError("log-score regret needs both probabilities in (0, 1)")
    return bernoulli_kl(p_bayes, p_plugin)


def brier_regret(p_bayes, p_plugin):
    if not (0 <= p_bayes <= 1 and 0 <= p_plugin <= 1):
        raise DomainError("Brier regret needs both probabilities in [0, 1]")
    return (p_bayes - p_plugin) ** 2
