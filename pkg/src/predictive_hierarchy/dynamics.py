"""Martingale schemes, asymptotic discrepancy sweeps and stopping distortion.

A *scheme* is a rule ``theta_n -> theta_{n+1}`` driven by the next bit.
Sampling ``X_{n+1} ~ Bern(theta_n)`` makes ``(theta_n)`` a martingale for all
three variants here, but only :class:`BayesMean` (and the harmonic
:class:`LearningRate`) is a function of ``(n, S_n)`` alone.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from . import rng as _rng
from .errors import NoWitness, PredictiveError
from .measures import (Beta, MixingMeasure, PosteriorState, _resolve_mode, coerce,
                       mean_variance, posterior)
from .predictive import GapReport, gap_report, run_prob


# -- schemes -----------------------------------------------------------------

@dataclass(frozen=True)
class SchemeState:
    n: int
    s: int
    theta: object


@dataclass(frozen=True)
class Counterexample:
    """``theta_n = 1/2 + sum_i 2^-(i+2) (2 x_i - 1)``; order dependent, stays in [1/4, 3/4]."""

    def initial(self) -> SchemeState:
        return SchemeState(0, 0, Fraction(1, 2))

    @staticmethod
    def increment(i: int) -> Fraction:
        return Fraction(1, 2 ** (i + 2))

    def step(self, state: SchemeState, x: int) -> SchemeState:
        i = state.n + 1
        return SchemeState(i, state.s + x, state.theta + self.increment(i) * (2 * x - 1))

    def step_arrays(self, n: int, s, theta, x):
        return theta + 2.0 ** -(n + 3) * (2 * x - 1)


@dataclass(frozen=True)
class LearningRate:
    """``theta_{n} = theta_{n-1} + gamma_n (x_n - theta_{n-1})``.

    ``kind="harmonic"`` uses ``gamma_n = 1/(n + c)``, which reproduces the
    Beta(c theta0, c (1 - theta0)) posterior mean.  ``kind="power"`` uses
    ``gamma_n = n^-alpha``; its limit law has no closed form and any output
    built on it is exploratory.
    """

    kind: str
    theta0: object
    c: object = None
    alpha: object = None
    exact: bool | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("harmonic", "power"):
            raise PredictiveError(f"unknown learning-rate kind {self.kind!r}")
        param = self.c if self.kind == "harmonic" else self.alpha
        if param is None:
            raise PredictiveError(f"{self.kind} learning rate needs its parameter")
        exact = _resolve_mode(self.exact, self.theta0, param)
        theta0 = coerce(self.theta0, exact)
        if not 0 <= theta0 <= 1:
            raise PredictiveError("theta0 must lie in [0, 1]")
        object.__setattr__(self, "theta0", theta0)
        object.__setattr__(self, "exact", exact)
        if self.kind == "harmonic":
            c = coerce(self.c, exact)
            if not c > 0:
                raise PredictiveError("c must be positive")
            object.__setattr__(self, "c", c)
        else:
            alpha = coerce(self.alpha, exact)
            if not alpha > 0:
                raise PredictiveError("alpha must be positive")
            object.__setattr__(self, "alpha", alpha)

    @classmethod
    def one_over_n_plus_c(cls, c, theta0, **kw) -> "LearningRate":
        return cls("harmonic", theta0, c=c, **kw)

    @classmethod
    def power(cls, alpha, theta0, **kw) -> "LearningRate":
        return cls("power", theta0, alpha=alpha, **kw)

    def gamma(self, n: int):
        if self.kind == "harmonic":
            return 1 / (n + self.c)
        if self.exact and self.alpha.denominator == 1:
            return Fraction(1, n ** int(self.alpha))
        return float(n) ** -float(self.alpha)

    def initial(self) -> SchemeState:
        return SchemeState(0, 0, self.theta0)

    def step(self, state: SchemeState, x: int) -> SchemeState:
        n = state.n + 1
        return SchemeState(n, state.s + x, state.theta + self.gamma(n) * (x - state.theta))

    def step_arrays(self, n: int, s, theta, x):
        return theta + float(self.gamma(n + 1)) * (x - theta)


@dataclass(frozen=True)
class BayesMean:
    prior: MixingMeasure
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def mean(self, n: int, s: int):
        key = (n, s)
        if key not in self._cache:
            self._cache[key] = mean_variance(posterior(PosteriorState(self.prior, n, s)))[0]
        return self._cache[key]

    def initial(self) -> SchemeState:
        return SchemeState(0, 0, self.mean(0, 0))

    def step(self, state: SchemeState, x: int) -> SchemeState:
        n, s = state.n + 1, state.s + x
        return SchemeState(n, s, self.mean(n, s))

    def step_arrays(self, n: int, s, theta, x):
        s_new = s + x
        if isinstance(self.prior, Beta):
            a, b = float(self.prior.alpha), float(self.prior.beta)
            return (a + s_new) / (a + b + n + 1)
        table = {int(v): float(self.mean(n + 1, int(v))) for v in np.unique(s_new)}
        return np.vectorize(table.__getitem__, otypes=[float])(s_new)


MartingaleScheme = Union[Counterexample, LearningRate, BayesMean]


def step_scheme(scheme: MartingaleScheme, state: SchemeState, x_next: int) -> SchemeState:
    """Advance ``scheme`` by one observation; the new value is ``.theta``."""
    if x_next not in (0, 1):
        raise PredictiveError("observations must be 0 or 1")
    return scheme.step(state, x_next)


def run_path(scheme: MartingaleScheme, path: Sequence[int]) -> SchemeState:
    state = scheme.initial()
    for x in path:
        state = step_scheme(scheme, state, int(x))
    return state


@dataclass(frozen=True)
class OrderVerdict:
    consistent: bool
    witness: tuple | None = None  # ((path_a, theta_a), (path_b, theta_b))


def order_dependence_check(scheme: MartingaleScheme, max_len: int = 4) -> OrderVerdict:
    """Look for two paths with the same (n, S_n) but different theta_n."""
    for n in range(1, max_len + 1):
        seen: dict = {}
        for path in itertools.product((1, 0), repeat=n):
            theta = run_path(scheme, path).theta
            s = sum(path)
            if s in seen and seen[s][1] != theta:
                return OrderVerdict(False, (seen[s], (path, theta)))
            seen.setdefault(s, (path, theta))
    return OrderVerdict(True)


def martingale_defect(scheme: MartingaleScheme, path: Sequence[int]):
    """Exact ``E[theta_{n+1} | F_n] - theta_n`` at the state reached by ``path``."""
    state = run_path(scheme, path)
    up, down = step_scheme(scheme, state, 1), step_scheme(scheme, state, 0)
    return state.theta * up.theta + (1 - state.theta) * down.theta - state.theta


# -- Monte Carlo checks --------------------------------------------------------

@dataclass(frozen=True)
class CidReport:
    prefix: tuple
    theta_n: float
    estimates: tuple
    standard_errors: tuple
    replications: int

    @property
    def deviations(self) -> tuple:
        return tuple(abs(e - self.theta_n) for e in self.estimates)

    @property
    def max_deviation(self) -> float:
        return max(self.deviations)

    @property
    def passed(self) -> bool:
        return all(d <= 3 * se for d, se in zip(self.deviations, self.standard_errors))


def _sample_prefix(scheme: MartingaleScheme, n: int, seed: int) -> tuple:
    gen = _rng.stream(seed, "prefix")
    state, path = scheme.initial(), []
    for _ in range(n):
        x = int(gen.random() < float(state.theta))
        path.append(x)
        state = scheme.step(state, x)
    return tuple(path)


def cid_check(scheme: MartingaleScheme, n: int, horizon: int, replications: int, seed: int,
              path: Sequence[int] | None = None) -> CidReport:
    """Estimate ``E[X_{n+j} | F_n]`` for ``j = 1..horizon`` by forward simulation.

    ``F_n`` is the prefix ``path`` if given, otherwise a prefix of length
    ``n`` drawn from the scheme itself with the same seed.  Each future bit is
    drawn as ``Bern(theta)`` at the current state.
    """
    if replications < 1000:
        raise PredictiveError("cid_check needs at least 1000 replications")
    if horizon < 1:
        raise PredictiveError("horizon must be at least 1")
    prefix = tuple(path) if path is not None else _sample_prefix(scheme, n, seed)
    if len(prefix) != n:
        raise PredictiveError("path length must equal n")
    start = run_path(scheme, prefix)
    sums = np.zeros(horizon)
    for gen, size in _rng.blocks(seed, "cid", replications):
        theta = np.full(size, float(start.theta))
        s = np.full(size, start.s, dtype=np.int64)
        u = gen.random((size, horizon))
        for j in range(horizon):
            x = (u[:, j] < theta).astype(np.int64)
            sums[j] += x.sum()
            theta = scheme.step_arrays(n + j, s, theta, x)
            s = s + x
    est = sums / replications
    # X_{n+j} is Bernoulli, so the binomial standard error uses the target mean
    p = float(start.theta)
    se = math.sqrt(p * (1 - p) / replications)
    return CidReport(prefix, p, tuple(est), (se,) * horizon, replications)


@dataclass(frozen=True)
class MartingaleCheck:
    theta_n: float
    estimate: float
    se: float

    @property
    def passed(self) -> bool:
        return abs(self.estimate - self.theta_n) <= 3 * self.se


def martingale_check(scheme: MartingaleScheme, path: Sequence[int], replications: int,
                     seed: int) -> MartingaleCheck:
    """Monte Carlo estimate of ``E[theta_{n+1} | F_n]`` at the state after ``path``."""
    start = run_path(scheme, path)
    n = len(path)
    vals = []
    for gen, size in _rng.blocks(seed, "martingale", replications):
        theta = np.full(size, float(start.theta))
        x = (gen.random(size) < theta).astype(np.int64)
        vals.append(scheme.step_arrays(n, np.full(size, start.s), theta, x))
    v = np.concatenate(vals)
    se = float(v.std(ddof=1) / math.sqrt(len(v))) if v.std() > 0 else 0.0
    return MartingaleCheck(float(start.theta), float(v.mean()), se)


# -- asymptotic experiments ------------------------------------------------------

@dataclass(frozen=True)
class GrowingHorizon:
    """Horizon ``k_n = max(2, round(c * g(n)))`` with ``g`` = sqrt or log."""

    c: float
    rule: str = "sqrt"

    def __post_init__(self) -> None:
        if self.c < 0:
            raise PredictiveError("c must be nonnegative")
        if self.rule not in ("sqrt", "log"):
            raise PredictiveError(f"unknown horizon rule {self.rule!r}")

    def __call__(self, n: int) -> int:
        g = math.sqrt(n) if self.rule == "sqrt" else math.log(n)
        return max(2, round(self.c * g))


@dataclass(frozen=True)
class ExperimentSpec:
    prior: MixingMeasure
    theta0_list: tuple
    n_grid: tuple
    k_spec: object  # tuple of ints or GrowingHorizon
    replications: int
    master_seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta0_list", tuple(float(t) for t in self.theta0_list))
        object.__setattr__(self, "n_grid", tuple(int(n) for n in self.n_grid))
        if not isinstance(self.k_spec, GrowingHorizon):
            object.__setattr__(self, "k_spec", tuple(int(k) for k in self.k_spec))
            if not self.k_spec or any(k < 1 for k in self.k_spec):
                raise PredictiveError("k list must be non-empty with k >= 1")
        if self.replications < 1:
            raise PredictiveError("replications must be at least 1")
        for name in ("theta0_list", "n_grid"):
            grid = getattr(self, name)
            if not grid or list(grid) != sorted(grid):
                raise PredictiveError(f"{name} must be non-empty and sorted")
        if any(not 0 < t < 1 for t in self.theta0_list):
            raise PredictiveError("theta0 values must lie in (0, 1)")
        if self.n_grid[0] < 0:
            raise PredictiveError("n values must be nonnegative")
        _rng.validate_seed(self.master_seed)


@dataclass(frozen=True)
class ResultRow:
    theta0: float
    n: int
    k: int
    mean_gap: float
    se: float
    mean_relative_gap: float
    relative_se: float


def path_gap(prior: MixingMeasure, n: int, s: int, k: int) -> GapReport:
    """Gap report for a single data path summarised by (n, s)."""
    return gap_report(posterior(PosteriorState(prior, n, s)), k)


def _as_float_measure(prior: MixingMeasure) -> MixingMeasure:
    if not prior.exact:
        return prior
    if isinstance(prior, Beta):
        return Beta(float(prior.alpha), float(prior.beta))
    return prior


def _gap_arrays(prior: MixingMeasure, n: int, s: np.ndarray, k: int) -> tuple:
    if isinstance(prior, Beta):
        a = float(prior.alpha) + s
        b = float(prior.beta) + (n - s)
        run = np.ones_like(a)
        for j in range(k):
            run *= (b + j) / (a + b + j)
        plugin = (b / (a + b)) ** k
        return run - plugin, run
    reports = {int(v): path_gap(prior, n, int(v), k) for v in np.unique(s)}
    gap = np.array([float(reports[int(v)].gap) for v in s])
    run = np.array([float(reports[int(v)].bayes) for v in s])
    return gap, run


def _success_counts(spec: ExperimentSpec) -> dict:
    """``{theta0: array (replications, len(n_grid))}`` of S_n along each path.

    Replicate ``r`` owns stream ``(seed, "data", r)``; all theta0 values share
    its uniforms, so paths at different theta0 are coupled.
    """
    top = max(spec.n_grid)
    idx = np.array(spec.n_grid)
    counts = {t: np.zeros((spec.replications, len(idx)), dtype=np.int64) for t in spec.theta0_list}
    for r in range(spec.replications):
        u = _rng.stream(spec.master_seed, "data", r).random(top)
        for t in spec.theta0_list:
            cum = np.concatenate(([0], np.cumsum(u < t)))
            counts[t][r] = cum[idx]
    return counts


def _summarise(values: np.ndarray) -> tuple:
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(len(values))) if len(values) > 1 else 0.0
    return mean, se


def _run_experiment(spec: ExperimentSpec, horizons) -> list:
    prior = _as_float_measure(spec.prior)
    counts = _success_counts(spec)
    rows = []
    for t in spec.theta0_list:
        for col, n in enumerate(spec.n_grid):
            for k in horizons(n):
                gap, run = _gap_arrays(prior, n, counts[t][:, col], k)
                rel = np.where(run > 0, gap / np.where(run > 0, run, 1.0), 0.0)
                mg, se = _summarise(gap)
                mr, rse = _summarise(rel)
                rows.append(ResultRow(t, n, k, mg, se, mr, rse))
    rows.sort(key=lambda row: (row.theta0, row.n, row.k))
    return rows


def discrepancy_experiment(spec: ExperimentSpec) -> list:
    """Mean Bayes-minus-plug-in gap over replicated i.i.d. Bern(theta0) paths."""
    if isinstance(spec.k_spec, GrowingHorizon):
        raise PredictiveError("discrepancy_experiment needs a fixed k list")
    ks = sorted(set(spec.k_spec))
    return _run_experiment(spec, lambda n: ks)


def growing_horizon_experiment(spec: ExperimentSpec) -> list:
    """Same sweep with one horizon per n, ``k_n`` from a :class:`GrowingHorizon`."""
    if not isinstance(spec.k_spec, GrowingHorizon):
        raise PredictiveError("growing_horizon_experiment needs a GrowingHorizon k_spec")
    return _run_experiment(spec, lambda n: [spec.k_spec(n)])


def loglog_slope(rows: Sequence[ResultRow], theta0: float, k: int | None = None,
                 n_min: int = 50, relative: bool = False) -> float:
    """OLS slope of log(mean gap) on log(n), using rows with ``n >= n_min``."""
    pts = [(r.n, r.mean_relative_gap if relative else r.mean_gap) for r in rows
           if r.theta0 == theta0 and (k is None or r.k == k) and r.n >= n_min]
    pts = [(n, g) for n, g in pts if g > 0]
    if len(pts) < 2:
        raise PredictiveError("need at least two positive points for a slope")
    x = np.log([n for n, _ in pts])
    y = np.log([g for _, g in pts])
    return float(np.polyfit(x, y, 1)[0])


def horizon_trend(rows: Sequence[ResultRow], theta0: float, threshold: float = 0.5,
                  relative: bool = True) -> str:
    """``"stabilizes"`` if the mean gap at the largest n keeps at least
    ``threshold`` of its value at the smallest n, else ``"vanishes"``.

    By default the relative gap ``(bayes - plugin) / bayes`` is compared.  At
    ``k ~ c sqrt(n)`` both run probabilities decay geometrically in ``k``, so
    the absolute gap (``relative=False``) goes to zero even when their ratio
    does not.
    """
    sel = sorted((r for r in rows if r.theta0 == theta0), key=lambda r: r.n)
    if len(sel) < 2:
        raise PredictiveError("need at least two n values")
    field_ = "mean_relative_gap" if relative else "mean_gap"
    first, last = getattr(sel[0], field_), getattr(sel[-1], field_)
    return "stabilizes" if last >= threshold * first and last > 0 else "vanishes"


# -- optimal stopping ------------------------------------------------------------

@dataclass(frozen=True)
class StoppingValue:
    value: object
    plugin_value: object
    gap: object
    argmax: int


def stopping_value_gap(post: MixingMeasure, K: int) -> StoppingValue:
    """Sup over ``2 <= tau <= K`` of the Bayes and plug-in run probabilities."""
    if K < 2:
        raise PredictiveError("K must be at least 2")
    m, _ = mean_variance(post)
    taus = range(2, K + 1)
    bayes = [run_prob(post, t) for t in taus]
    plug = [(1 - m) ** t for t in taus]
    best = max(range(len(bayes)), key=lambda i: (bayes[i], -i))
    V, Vt = bayes[best], max(plug)
    return StoppingValue(V, Vt, V - Vt, taus[best])


def effective_horizon(values: Sequence, r, K: int) -> int:
    """Largest ``tau`` in [2, K] with ``values[tau] >= r``; 1 if none qualifies."""
    feasible = [t for t in range(2, K + 1) if values[t] >= r]
    return max(feasible) if feasible else 1


@dataclass(frozen=True)
class BoundaryWitness:
    r: object
    tau_star: int
    tau_tilde: int
    tau0: int
    bayes_at_tau0: object
    plugin_at_tau0: object


def stopping_boundary_witness(post: MixingMeasure, K: int, tau0: int | None = None) -> BoundaryWitness:
    """Threshold ``r`` at which the Bayes horizon exceeds the plug-in horizon.

    ``r`` is the midpoint of ``((1-m)^tau0, E[(1-theta)^tau0])``; ``tau0``
    defaults to ``K - 1``.  A plug-in horizon of 1 means no ``tau >= 2``
    meets the threshold.
    """
    if K < 3:
        raise PredictiveError("K must be at least 3")
    m, var = mean_variance(post)
    if var == 0:
        raise NoWitness("posterior variance is zero; Bayes and plug-in horizons agree")
    tau0 = K - 1 if tau0 is None else tau0
    if not 2 <= tau0 <= K - 1:
        raise PredictiveError("tau0 must lie in [2, K-1]")
    bayes = {t: run_prob(post, t) for t in range(2, K + 1)}
    plug = {t: (1 - m) ** t for t in range(2, K + 1)}
    r = (bayes[tau0] + plug[tau0]) / 2
    ts, tt = effective_horizon(bayes, r, K), effective_horizon(plug, r, K)
    if not ts >= tau0 > tt:
        raise NoWitness(f"threshold {r} does not separate the horizons at tau0={tau0}")
    return BoundaryWitness(r, ts, tt, tau0, bayes[tau0], plug[tau0])
