"""Data behind the tables and figures, as header + rows.

The first three figure datasets are exact (no simulation); ``asymptotic`` is
seeded Monte Carlo and records its seed in a comment line.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .beta_exact import rising_factorial
from .dynamics import (ExperimentSpec, GrowingHorizon, discrepancy_experiment,
                       growing_horizon_experiment)
from .errors import PredictiveError, UnknownFigure
from .measures import Beta, PosteriorState, mean_variance, parse_measure, posterior
from .predictive import run_prob
from .scoring import brier_regret, log_score_regret

FIGURES = ("moment-insuff", "scoring-regret", "bayes-plugin-gap", "asymptotic")

REGRET_HEADER = ("n", "s_over_n", "k", "p_bayes", "p_plugin", "kl_regret", "brier_regret", "variance")
FIGURE_SAMPLE_SIZES = (5, 10, 20, 50, 100)


def _counts(n: int, ratio: Fraction) -> int:
    return round(Fraction(ratio) * n)


def regret_sweep(prior: Beta, n_list: Sequence[int], k_list: Sequence[int],
                 ratio=Fraction(2, 5)) -> list:
    """KL and Brier regret of the plug-in run forecast, one row per (n, k).

    ``S_n = round(ratio * n)``; probabilities are exact, the KL regret is a
    float.
    """
    rows = []
    for n in n_list:
        s = _counts(n, ratio)
        post = posterior(PosteriorState(prior, n, s))
        m, var = mean_variance(post)
        for k in k_list:
            pb, pp = run_prob(post, k), (1 - m) ** k
            rows.append((n, Fraction(s, n) if n else Fraction(0), k, pb, pp,
                         log_score_regret(pb, pp), brier_regret(pb, pp), var))
    return rows


def moment_insufficiency(m_grid=None, ks=(2, 4), concentrations=(1, 2, 5, 20, 100)) -> tuple:
    if m_grid is None:
        m_grid = [Fraction(i, 20) for i in range(1, 20)]
    header = ("m", "k", "c", "bayes", "lo", "hi")
    rows = []
    for m in m_grid:
        m = Fraction(m)
        for k in ks:
            lo, hi = (1 - m) ** k, 1 - m
            for c in concentrations:
                c = Fraction(c)
                a, b = c * m, c * (1 - m)
                bayes = rising_factorial(b, k) / rising_factorial(a + b, k)
                rows.append((m, k, c, bayes, lo, hi))
    return header, rows


def scoring_regret(n_list=FIGURE_SAMPLE_SIZES, k_list=range(1, 11),
                   priors=("jeffreys", "uniform")) -> tuple:
    header = ("prior",) + REGRET_HEADER
    rows = []
    for name in priors:
        rows += [(name,) + r for r in regret_sweep(parse_measure(name), n_list, k_list)]
    return header, rows


def bayes_plugin_gap(n_list=FIGURE_SAMPLE_SIZES, k_list=range(1, 11),
                     priors=("jeffreys", "uniform")) -> tuple:
    header = ("prior", "n", "s", "k", "bayes", "plugin", "gap", "relative_gap", "variance")
    rows = []
    for name in priors:
        prior = parse_measure(name)
        for n in n_list:
            s = _counts(n, Fraction(2, 5))
            post = posterior(PosteriorState(prior, n, s))
            m, var = mean_variance(post)
            for k in k_list:
                bayes, plug = run_prob(post, k), (1 - m) ** k
                rows.append((name, n, s, k, bayes, plug, bayes - plug, (bayes - plug) / bayes, var))
    return header, rows


ASYMPTOTIC_N = (10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000)


def asymptotic(seed: int, replications: int = 200, n_grid=ASYMPTOTIC_N,
               theta0s=(0.3, 0.5, 0.7), ks=(2, 4, 8), cs=(0.5, 1.0, 2.0)) -> tuple:
    prior = parse_measure("jeffreys")
    header = ("panel", "theta0", "c", "n", "k", "mean_gap", "se", "mean_relative_gap", "relative_se")
    rows = []
    fixed = ExperimentSpec(prior, theta0s, n_grid, ks, replications, seed)
    for r in discrepancy_experiment(fixed):
        rows.append(("fixed", r.theta0, "", r.n, r.k, r.mean_gap, r.se,
                     r.mean_relative_gap, r.relative_se))
    for c in cs:
        spec = ExperimentSpec(prior, theta0s, n_grid, GrowingHorizon(c), replications, seed)
        for r in growing_horizon_experiment(spec):
            rows.append(("growing", r.theta0, c, r.n, r.k, r.mean_gap, r.se,
                         r.mean_relative_gap, r.relative_se))
    return header, rows


def figure_data(figure_id: str, seed: int | None = None, replications: int = 200) -> tuple:
    """Return ``(header, rows, comments)`` for a figure dataset."""
    if figure_id == "moment-insuff":
        return (*moment_insufficiency(), ())
    if figure_id == "scoring-regret":
        return (*scoring_regret(), ())
    if figure_id == "bayes-plugin-gap":
        return (*bayes_plugin_gap(), ())
    if figure_id == "asymptotic":
        if seed is None:
            raise PredictiveError("the asymptotic figure needs a seed")
        comments = (f"seed={seed}", f"replications={replications}", "prior=jeffreys")
        return (*asymptotic(seed, replications), comments)
    raise UnknownFigure(f"unknown figure {figure_id!r}; choose from {', '.join(FIGURES)}")
