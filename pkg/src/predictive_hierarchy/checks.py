"""Property suite behind ``predictive-hierarchy verify``.

Each check returns True on success; an exception counts as a failure.  Sizes
are chosen so the whole suite runs in well under a minute.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Callable

import numpy as np

from . import beta_exact as bx
from .dynamics import (BayesMean, Counterexample, ExperimentSpec, LearningRate,
                       discrepancy_experiment, martingale_check, martingale_defect,
                       path_gap, run_path, stopping_value_gap)
from .hierarchy import (check_complete_monotonicity, injectivity_roundtrip, moments_from_runs,
                        runs_from_moments, transform_matrix)
from .measures import (Beta, Discrete, PointMass, PosteriorState, mean_variance, moment,
                       moments, posterior, two_point_with_mean)
from .predictive import (all_patterns, gap_report, mc_pattern_check, pattern_prob,
                         predictive_range, range_endpoint_measures, run_prob)
from .scoring import (bernoulli_kl, brier_regret, kl_quadratic_error, log_score_regret,
                      sanov_posterior_density)

REGISTRY: list[tuple[str, str, Callable[[], bool]]] = []


def check(module: str):
    def wrap(fn):
        REGISTRY.append((module, fn.__name__, fn))
        return fn
    return wrap


def random_rational_measure(rnd: random.Random):
    """Beta with rational parameters or a discrete measure with at most 5 rational atoms."""
    if rnd.random() < 0.5:
        return Beta(Fraction(rnd.randint(1, 40), rnd.randint(1, 8)),
                    Fraction(rnd.randint(1, 40), rnd.randint(1, 8)))
    size = rnd.randint(1, 5)
    locs = {Fraction(rnd.randint(0, 100), 100) for _ in range(size)}
    raw = [(x, Fraction(rnd.randint(1, 9))) for x in locs]
    total = sum(w for _, w in raw)
    return Discrete(tuple((x, w / total) for x, w in raw))


def _measures():
    return [Beta(Fraction(1, 2), Fraction(1, 2)), Beta(2, 2), Beta(Fraction(5, 2), Fraction(7, 2)),
            Beta(1, 7), Discrete(((Fraction(1, 5), Fraction(1, 2)), (Fraction(4, 5), Fraction(1, 2)))),
            Discrete(((0, Fraction(1, 3)), (Fraction(1, 2), Fraction(1, 3)), (1, Fraction(1, 3)))),
            PointMass(Fraction(3, 10))]


# -- measures ------------------------------------------------------------------

@check("measures")
def family_preserved():
    for prior in _measures():
        for n, s in [(0, 0), (3, 1), (6, 6)]:
            try:
                post = posterior(PosteriorState(prior, n, s))
            except ValueError:
                continue
            if type(post) is not type(prior):
                return False
    return True


@check("measures")
def beta_posterior_mean():
    for a, b in [(Fraction(1, 2), Fraction(1, 2)), (Fraction(2), Fraction(3)), (Fraction(7, 3), Fraction(1))]:
        for n in range(8):
            for s in range(n + 1):
                post = posterior(PosteriorState(Beta(a, b), n, s))
                if mean_variance(post)[0] != (a + s) / (a + b + n):
                    return False
    return True


@check("measures")
def two_point_mean_exact():
    rnd = random.Random(1)
    for _ in range(200):
        a, m, b = sorted(rnd.sample(range(0, 101), 3))
        nu = two_point_with_mean(Fraction(a, 100), Fraction(b, 100), Fraction(m, 100))
        if moment(nu, 1) != Fraction(m, 100):
            return False
        fnu = two_point_with_mean(a / 100, b / 100, m / 100)
        if abs(moment(fnu, 1) - m / 100) > 1e-14:
            return False
    return True


@check("measures")
def moments_non_increasing():
    return all(all(x >= y for x, y in zip(mu, mu[1:])) for mu in (moments(nu, 12) for nu in _measures()))


# -- hierarchy -----------------------------------------------------------------

@check("hierarchy")
def roundtrip_exact():
    rnd = random.Random(2)
    for _ in range(100):
        nu = random_rational_measure(rnd)
        K = rnd.randint(1, 32)
        mu = moments(nu, K)
        if moments_from_runs(runs_from_moments(mu)) != mu:
            return False
    return True


@check("hierarchy")
def runs_completely_monotone():
    rnd = random.Random(3)
    for _ in range(50):
        rep = injectivity_roundtrip(random_rational_measure(rnd), 12)
        if rep.max_error != 0 or not check_complete_monotonicity(list(rep.runs), tol=0):
            return False
    return True


@check("hierarchy")
def transform_triangular_unit_diagonal():
    for K in range(17):
        T = np.array(transform_matrix(K), dtype=object)
        if any(T[i][j] != 0 for i in range(K + 1) for j in range(i + 1, K + 1)):
            return False
        if any(abs(T[i][i]) != 1 for i in range(K + 1)):
            return False
        if not (T.dot(T) == np.identity(K + 1, dtype=int)).all():
            return False
    return True


@check("hierarchy")
def top_moment_coefficient():
    mu = moments(Beta(Fraction(5, 2), Fraction(7, 2)), 10)
    eps = Fraction(1, 1000)
    for k in range(1, 11):
        bumped = list(mu)
        bumped[k] += eps
        if runs_from_moments(bumped)[k] - runs_from_moments(mu)[k] != (-1) ** k * eps:
            return False
    return True


# -- predictive ----------------------------------------------------------------

@check("predictive")
def patterns_normalized():
    for nu in _measures():
        for k in range(1, 9):
            if sum(pattern_prob(nu, p) for p in all_patterns(k)) != 1:
                return False
    return True


@check("predictive")
def jensen_strict_and_k1_zero():
    for nu in _measures():
        var = mean_variance(nu)[1]
        if gap_report(nu, 1).gap != 0:
            return False
        for k in range(2, 9):
            rep = gap_report(nu, k)
            if (var > 0 and not rep.gap > 0) or not rep.within_bound:
                return False
    return True


@check("predictive")
def second_order_identity():
    return all(gap_report(nu, 2).gap == mean_variance(nu)[1] for nu in _measures())


@check("predictive")
def fourth_order_identity():
    for nu in _measures():
        m, var = mean_variance(nu)
        k3 = _central(nu, 3)
        kappa4 = _central(nu, 4) - 3 * var**2
        # the third-moment term enters with a minus sign: 1 - theta = (1 - m) - (theta - m)
        expected = 6 * (1 - m) ** 2 * var - 4 * k3 * (1 - m) + kappa4 + 3 * var**2
        if abs(float(gap_report(nu, 4).gap - expected)) > 1e-12:
            return False
    return True


def _central(nu, j):
    """E[(theta - m)^j] from raw theta-moments, a route separate from run_prob."""
    mu = moments(nu, j)
    m = mu[1]
    return sum(math.comb(j, i) * mu[i] * (-m) ** (j - i) for i in range(j + 1))


@check("predictive")
def range_endpoints_attained():
    for m in [Fraction(1, 10), Fraction(1, 2), Fraction(5, 7)]:
        for k in range(2, 7):
            lo, hi = predictive_range(m, k)
            p, two = range_endpoint_measures(m)
            if run_prob(p, k) != lo or run_prob(two, k) != hi:
                return False
    return True


@check("predictive")
def monte_carlo_patterns():
    cases = [(Beta(Fraction(5, 2), Fraction(7, 2)), "00"), (Beta(2, 2), "0110"),
             (Discrete(((0.2, 0.5), (0.8, 0.5))), "10")]
    return all(mc_pattern_check(nu, pat, 100_000, seed=11 + i).passed
               for i, (nu, pat) in enumerate(cases))


# -- beta_exact ----------------------------------------------------------------

@check("beta_exact")
def hill_matches_measures():
    jeff = Beta(Fraction(1, 2), Fraction(1, 2))
    for n in range(0, 51, 5):
        for s in range(n + 1):
            post = posterior(PosteriorState(jeff, n, s))
            for k in range(1, 13):
                if bx.hill_run_prob(n, s, k) != run_prob(post, k):
                    return False
    return True


@check("beta_exact")
def chain_rule():
    for n in range(12):
        for s in range(n + 1):
            b, N = Fraction(2 * (n - s) + 1, 2), n + 1
            for k in range(1, 10):
                if bx.hill_run_prob(n, s, k + 1) != bx.hill_run_prob(n, s, k) * (b + k) / (N + k):
                    return False
    return True


@check("beta_exact")
def variance_identity():
    for n in range(51):
        for s in range(n + 1):
            lhs = bx.hill_run_prob(n, s, 2) - (1 - bx.hill_one_step(n, s)) ** 2
            if lhs != bx.beta_posterior_variance(bx.JEFFREYS, n, s):
                return False
    return True


@check("beta_exact")
def mobius_consistency():
    for n, s in [(0, 0), (5, 2), (9, 9), (20, 3)]:
        mu = [bx.beta_moment(bx.JEFFREYS, n, s, j) for j in range(11)]
        r = runs_from_moments(mu)
        if any(r[k] != bx.hill_run_prob(n, s, k) for k in range(1, 11)):
            return False
    return True


# -- scoring -------------------------------------------------------------------

@check("scoring")
def dominance_on_grid():
    for n in (1, 5, 20, 100):
        for s in range(0, n + 1, max(1, n // 5)):
            for k in range(2, 7):
                pb = bx.hill_run_prob(n, s, k)
                pp = (1 - bx.hill_one_step(n, s)) ** k
                if not (log_score_regret(pb, pp) > 0 and brier_regret(pb, pp) > 0):
                    return False
    return True


@check("scoring")
def pinsker_floor():
    grid = np.linspace(0, 1, 41)
    return all(bernoulli_kl(p, q) >= 2 * (p - q) ** 2 - 1e-15 for p in grid for q in grid[1:-1])


@check("scoring")
def cubic_remainder():
    d = np.logspace(-4, -1, 20)
    err = [abs(kl_quadratic_error(0.4, 0.4 + x).error) for x in d]
    slope = np.polyfit(np.log(d), np.log(err), 1)[0]
    return abs(slope - 3) <= 0.2


@check("scoring")
def sanov_matches_conjugate():
    grid = np.linspace(0, 1, 10_001)
    dens = sanov_posterior_density(Beta(0.5, 0.5), 5, 0.4, grid)
    exact = np.exp(Beta(2.5, 3.5).log_density(grid))
    return float(np.max(np.abs(dens - exact))) <= 1e-6


# -- dynamics ------------------------------------------------------------------

@check("dynamics")
def counterexample_bounded():
    scheme = Counterexample()
    lo, hi = Fraction(1, 4), Fraction(3, 4)
    states = [scheme.initial()]
    for _ in range(12):
        states = [scheme.step(st, x) for st in states for x in (0, 1)]
        if not all(lo <= st.theta <= hi for st in states):
            return False
    return True


@check("dynamics")
def martingale_property():
    schemes = [LearningRate.one_over_n_plus_c(2, Fraction(1, 3)),
               LearningRate.power(0.7, 0.5), BayesMean(Beta(Fraction(1, 2), Fraction(1, 2)))]
    paths = [(1, 0, 1), (0, 0, 0, 1, 1)]
    for i, sc in enumerate(schemes):
        for j, path in enumerate(paths):
            if abs(martingale_defect(sc, path)) > 1e-15:
                return False
            if not martingale_check(sc, path, 100_000, seed=100 + 10 * i + j).passed:
                return False
    return True


@check("dynamics")
def counterexample_fair_coin_martingale():
    # a martingale under fair-coin data; under Bern(theta_n) data it drifts unless theta_n = 1/2
    sc = Counterexample()
    for path in [(), (1,), (1, 0, 1), (0, 0, 0, 1, 1)]:
        st = run_path(sc, path)
        up, down = sc.step(st, 1).theta, sc.step(st, 0).theta
        if (up + down) / 2 != st.theta:
            return False
        if (martingale_defect(sc, path) == 0) != (st.theta == Fraction(1, 2)):
            return False
    return True


@check("dynamics")
def learning_rate_closed_form():
    c, t0 = Fraction(3), Fraction(2, 5)
    sc = LearningRate.one_over_n_plus_c(c, t0)
    rnd = random.Random(4)
    for _ in range(50):
        path = [rnd.randint(0, 1) for _ in range(rnd.randint(0, 20))]
        st = run_path(sc, path)
        post = posterior(PosteriorState(Beta(c * t0, c * (1 - t0)), len(path), sum(path)))
        if st.theta != (sum(path) + c * t0) / (len(path) + c) or st.theta != mean_variance(post)[0]:
            return False
    return True


@check("dynamics")
def stopping_gap_is_variance():
    return all(stopping_value_gap(nu, K).gap == mean_variance(nu)[1]
               for nu in _measures() for K in (2, 5, 9))


@check("dynamics")
def discrepancy_rows_bounded():
    jeff = Beta(Fraction(1, 2), Fraction(1, 2))
    spec = ExperimentSpec(jeff, (0.3, 0.6), (5, 20, 80), (2, 3, 5), 20, 7)
    for row in discrepancy_experiment(spec):
        # every per-path gap obeys the bound, hence so does the mean over paths
        bound = row.k * (row.k - 1) / 2 * max(
            float(path_gap(jeff, row.n, s, 2).variance) for s in range(row.n + 1))
        if not 0 < row.mean_gap <= bound:
            return False
    return True


def run_all(verbose: bool = True, out=None) -> tuple[int, int]:
    import sys
    out = out or sys.stdout
    passed = failed = 0
    for module, name, fn in REGISTRY:
        try:
            ok = bool(fn())
            note = ""
        except Exception as exc:  # a crashing check is a failing check
            ok, note = False, f" ({type(exc).__name__}: {exc})"
        passed += ok
        failed += not ok
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'}  {module}.{name}{note}", file=out)
    if verbose:
        print(f"{passed} passed, {failed} failed", file=out)
    return passed, failed
