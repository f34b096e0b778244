from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from predictive_hierarchy import rng
from predictive_hierarchy.dynamics import (BayesMean, Counterexample, ExperimentSpec,
                                           GrowingHorizon, LearningRate, cid_check,
                                           discrepancy_experiment, effective_horizon,
                                           growing_horizon_experiment, horizon_trend,
                                           loglog_slope, martingale_check, martingale_defect,
                                           order_dependence_check, path_gap, run_path,
                                           step_scheme, stopping_boundary_witness,
                                           stopping_value_gap)
from predictive_hierarchy.errors import NoWitness, PredictiveError
from predictive_hierarchy.measures import Beta, Discrete, PointMass, PosteriorState, mean_variance, posterior

F = Fraction
JEFFREYS = Beta(F(1, 2), F(1, 2))
paths = st.lists(st.integers(0, 1), max_size=25)


def exact_future_mean(scheme, state, j):
    """E[X_{n+j} | F_n] when each bit is drawn as Bern(theta) at the current state."""
    if j == 1:
        return state.theta
    up, down = scheme.step(state, 1), scheme.step(state, 0)
    return state.theta * exact_future_mean(scheme, up, j - 1) + (1 - state.theta) * exact_future_mean(
        scheme, down, j - 1)


def test_counterexample_values():
    sc = Counterexample()
    assert run_path(sc, (1, 0)).theta == F(9, 16)
    assert run_path(sc, (0, 1)).theta == F(7, 16)
    assert order_dependence_check(sc).witness == (((1, 0), F(9, 16)), ((0, 1), F(7, 16)))


def test_counterexample_bounded_on_all_paths():
    sc = Counterexample()
    for n in range(13):
        for path in product((0, 1), repeat=n):
            assert F(1, 4) <= run_path(sc, path).theta <= F(3, 4)


def test_counterexample_is_fair_coin_martingale_only():
    sc = Counterexample()
    for path in [(), (1,), (0, 1, 1), (1, 1, 0, 0)]:
        st_ = run_path(sc, path)
        assert (sc.step(st_, 1).theta + sc.step(st_, 0).theta) / 2 == st_.theta
    assert martingale_defect(sc, ()) == 0
    # under self-generated Bern(theta_n) data the drift is c_{n+1} (2 theta_n - 1)
    assert martingale_defect(sc, (1,)) == F(1, 16) * (2 * F(5, 8) - 1)


def test_exchange_consistent_schemes():
    assert order_dependence_check(BayesMean(JEFFREYS)).consistent
    assert order_dependence_check(LearningRate.one_over_n_plus_c(2, F(1, 3))).consistent
    assert not order_dependence_check(LearningRate.power(F(1, 2), F(1, 2))).consistent


def test_learning_rate_closed_form_example():
    sc = LearningRate.one_over_n_plus_c(F(3), F(2, 5))
    path = (1, 1, 0, 1, 0, 0, 0)
    assert run_path(sc, path).theta == (3 + 3 * F(2, 5)) / (7 + 3)


def test_scheme_validation():
    with pytest.raises(PredictiveError):
        LearningRate.one_over_n_plus_c(0, F(1, 2))
    with pytest.raises(PredictiveError):
        LearningRate.power(F(1, 2), F(3, 2))
    with pytest.raises(PredictiveError):
        LearningRate("cosine", F(1, 2), c=1)


def test_cid_bayes_mean_passes():
    rep = cid_check(BayesMean(JEFFREYS), 5, 3, 100_000, seed=2)
    assert rep.passed and len(rep.prefix) == 5


def test_cid_horizon_one_is_unbiased():
    for sc in [Counterexample(), LearningRate.power(0.6, 0.3), BayesMean(Beta(2.0, 2.0))]:
        rep = cid_check(sc, 4, 1, 50_000, seed=9)
        assert rep.passed


def test_cid_counterexample_near_half_passes():
    # theta_3 = 17/32 after (1, 0, 0): the drift stays below one standard error
    assert cid_check(Counterexample(), 3, 4, 100_000, seed=1, path=(1, 0, 0)).passed


def test_cid_counterexample_drifts_off_half():
    sc = Counterexample()
    st_ = run_path(sc, (1, 1, 1))
    assert exact_future_mean(sc, st_, 2) != st_.theta
    rep = cid_check(sc, 3, 4, 100_000, seed=1, path=(1, 1, 1))
    assert not rep.passed


def test_cid_preconditions():
    with pytest.raises(PredictiveError):
        cid_check(Counterexample(), 3, 2, 999, seed=1)
    with pytest.raises(PredictiveError):
        cid_check(Counterexample(), 3, 2, 1000, seed=1, path=(1, 0))


def test_martingale_check_monte_carlo():
    for sc in [LearningRate.power(0.7, 0.5), BayesMean(JEFFREYS), LearningRate.one_over_n_plus_c(2, 0.25)]:
        assert martingale_check(sc, (1, 0, 1), 100_000, seed=4).passed


def test_path_gap_examples():
    g = path_gap(JEFFREYS, 5, 2, 2)
    assert g.gap == F(35, 1008)
    for s in range(6):
        assert path_gap(JEFFREYS, 5, s, 1).gap == 0


def test_growing_horizon():
    h = GrowingHorizon(1.0)
    assert [h(n) for n in (1, 4, 100, 10_000)] == [2, 2, 10, 100]
    assert GrowingHorizon(0.5)(100) == 5
    assert GrowingHorizon(1.0, "log")(10_000) == 9
    with pytest.raises(PredictiveError):
        GrowingHorizon(1.0, "cube")


def _spec(**kw):
    base = dict(prior=JEFFREYS, theta0_list=(0.3, 0.5), n_grid=(10, 50, 200), k_spec=(2, 4),
                replications=40, master_seed=11)
    base.update(kw)
    return ExperimentSpec(**base)


def test_experiment_is_reproducible_and_seed_sensitive():
    a = discrepancy_experiment(_spec())
    assert a == discrepancy_experiment(_spec())
    assert a != discrepancy_experiment(_spec(master_seed=12))
    assert [(r.theta0, r.n, r.k) for r in a] == sorted((t, n, k) for t in (0.3, 0.5) for n in (10, 50, 200)
                                                      for k in (2, 4))


def test_experiment_rows_do_not_depend_on_grid_partition():
    full = discrepancy_experiment(_spec())
    part = discrepancy_experiment(_spec(theta0_list=(0.5,), n_grid=(50, 200), k_spec=(4,)))
    lookup = {(r.theta0, r.n, r.k): r for r in full}
    for r in part:
        assert lookup[(r.theta0, r.n, r.k)] == r


def test_experiment_matches_exact_path_gaps():
    spec = _spec(replications=5)
    rows = discrepancy_experiment(spec)
    # rebuild the success counts from the documented stream layout
    for row in rows:
        gaps = []
        for r in range(5):
            u = rng.stream(11, "data", r).random(200)
            s = int(np.sum(u[: row.n] < row.theta0))
            gaps.append(float(path_gap(JEFFREYS, row.n, s, row.k).gap))
        assert row.mean_gap == pytest.approx(np.mean(gaps), rel=1e-12)


def test_experiment_non_beta_prior():
    prior = Discrete(((0.25, 0.5), (0.75, 0.5)))
    rows = discrepancy_experiment(_spec(prior=prior, replications=10))
    assert all(r.mean_gap >= 0 for r in rows)


def test_spec_validation():
    for kw in [dict(theta0_list=(0.5, 0.3)), dict(theta0_list=(1.0,)), dict(k_spec=()),
               dict(replications=0), dict(master_seed=-1)]:
        with pytest.raises(PredictiveError):
            _spec(**kw)
    with pytest.raises(PredictiveError):
        discrepancy_experiment(_spec(k_spec=GrowingHorizon(1.0)))
    with pytest.raises(PredictiveError):
        growing_horizon_experiment(_spec())


def test_fixed_k_rate_and_log_horizon_vanish():
    spec = _spec(theta0_list=(0.5,), n_grid=(50, 100, 200, 500, 1000, 2000), k_spec=(2,), replications=100)
    assert loglog_slope(discrepancy_experiment(spec), 0.5, k=2) == pytest.approx(-1, abs=0.15)
    spec = _spec(theta0_list=(0.5,), n_grid=(100, 10_000), k_spec=GrowingHorizon(1.0, "log"), replications=50)
    rows = growing_horizon_experiment(spec)
    assert rows[-1].mean_gap < 0.1 * rows[0].mean_gap
    assert horizon_trend(rows, 0.5) == "vanishes"


def test_stopping_gap_equals_variance():
    post = posterior(PosteriorState(JEFFREYS, 5, 2))
    v = stopping_value_gap(post, 4)
    assert v.gap == F(35, 1008) and v.value == F(3, 8) and v.argmax == 2
    assert stopping_value_gap(PointMass(F(2, 5)), 6).gap == 0


def test_stopping_witness():
    post = posterior(PosteriorState(JEFFREYS, 5, 2))
    w = stopping_boundary_witness(post, 4)
    assert (w.tau_star, w.tau_tilde, w.tau0) == (3, 2, 3)
    assert float(w.r) == pytest.approx(0.228, abs=5e-4)
    assert w.plugin_at_tau0 < w.r < w.bayes_at_tau0
    with pytest.raises(NoWitness):
        stopping_boundary_witness(PointMass(F(1, 2)), 4)


def test_effective_horizon_defaults_to_one():
    assert effective_horizon({2: F(1, 10), 3: F(1, 20)}, F(1, 2), 3) == 1


@settings(max_examples=60, deadline=None)
@given(paths, st.fractions(min_value=F(1, 10), max_value=5, max_denominator=10),
       st.fractions(min_value=0, max_value=1, max_denominator=20))
def test_harmonic_rate_is_a_posterior_mean(path, c, theta0):
    st_ = run_path(LearningRate.one_over_n_plus_c(c, theta0), path)
    n, s = len(path), sum(path)
    assert st_.theta == (s + c * theta0) / (n + c)
    if 0 < theta0 < 1:
        prior = Beta(c * theta0, c * (1 - theta0))
        assert st_.theta == mean_variance(posterior(PosteriorState(prior, n, s)))[0]


@settings(max_examples=60, deadline=None)
@given(paths)
def test_schemes_stay_in_unit_interval(path):
    for sc in [Counterexample(), LearningRate.power(F(1, 2), F(1, 3)), BayesMean(JEFFREYS)]:
        state = sc.initial()
        for x in path:
            state = step_scheme(sc, state, x)
            assert 0 <= state.theta <= 1


@settings(max_examples=40, deadline=None)
@given(paths)
def test_exact_martingale_for_rate_and_bayes(path):
    for sc in [LearningRate.one_over_n_plus_c(F(2), F(1, 3)), LearningRate.power(F(1), F(1, 3)),
               BayesMean(Beta(F(1, 2), F(3, 2)))]:
        assert martingale_defect(sc, path) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 40).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))), st.integers(2, 10))
def test_stopping_gap_is_variance_property(ns, K):
    n, s = ns
    post = posterior(PosteriorState(JEFFREYS, n, s))
    assert stopping_value_gap(post, K).gap == mean_variance(post)[1]


def test_sqrt_horizon_relative_gap_persists_absolute_vanishes():
    spec = _spec(theta0_list=(0.5,), n_grid=(100, 10_000), k_spec=GrowingHorizon(1.0), replications=50)
    rows = growing_horizon_experiment(spec)
    assert horizon_trend(rows, 0.5) == "stabilizes"
    assert horizon_trend(rows, 0.5, relative=False) == "vanishes"
