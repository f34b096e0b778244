"""One test per acceptance criterion, at the stated tolerances and time limits."""

import csv
import io
import random
import time
from fractions import Fraction
from itertools import product


from predictive_hierarchy.beta_exact import hill_one_step, hill_run_prob
from predictive_hierarchy.cli import main
from predictive_hierarchy.dynamics import (Counterexample, ExperimentSpec, GrowingHorizon, cid_check,
                                           discrepancy_experiment, growing_horizon_experiment,
                                           loglog_slope, order_dependence_check, run_path,
                                           stopping_boundary_witness, stopping_value_gap)
from predictive_hierarchy.hierarchy import check_complete_monotonicity, injectivity_roundtrip
from predictive_hierarchy.measures import (Beta, Discrete, PointMass, PosteriorState, mean_variance,
                                           posterior, two_point_with_mean)
from predictive_hierarchy.predictive import (mc_pattern_check, pattern_prob, predictive_range,
                                             range_endpoint_measures, run_prob)
from predictive_hierarchy.scoring import log_score_regret

from . import oracles

F = Fraction
JEFFREYS = Beta(F(1, 2), F(1, 2))


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def test_c01_table3_reproduction(capsys, criterion):
    expected = [("2", "0.340", "0.375", "9.3%"), ("3", "0.199", "0.258", "23.0%"),
                ("4", "0.116", "0.186", "37.8%")]
    with Timer() as t:
        code = main(["table3", "--n", "5", "--s", "2", "--kmax", "4"])
        shown = [tuple(r) for r in csv.reader(io.StringIO(capsys.readouterr().out))][1:]
        main(["table3", "--n", "5", "--s", "2", "--kmax", "4", "--exact"])
        exact = [tuple(r) for r in csv.reader(io.StringIO(capsys.readouterr().out))][1:]
    a, b = F(5, 2), F(7, 2)
    oracle_ok = all(F(row[2]) == oracles.beta_mixed_exact(a, b, 0, int(row[0]))
                    and F(row[1]) == (b / (a + b)) ** int(row[0]) for row in exact)
    mismatches = [(e, s) for e, s in zip(expected, shown) if e != s]
    ok = code == 0 and not mismatches and oracle_ok and F(exact[0][2]) == F(3, 8) and t.seconds < 1
    criterion(1, "table3 reproduction", ok,
              f"mismatches={mismatches} rationals_match_oracle={oracle_ok} t={t.seconds:.3f}s")
    assert ok


def test_c02_variance_identity(criterion):
    with Timer() as t:
        bad = []
        for n in range(51):
            for s in range(n + 1):
                a, b = F(2 * s + 1, 2), F(2 * (n - s) + 1, 2)
                var = a * b / ((a + b) ** 2 * (a + b + 1))
                if hill_run_prob(n, s, 2) - (1 - hill_one_step(n, s)) ** 2 != var:
                    bad.append((n, s))
        v5 = hill_run_prob(5, 2, 2) - (1 - hill_one_step(5, 2)) ** 2
    ok = not bad and v5 == F(35, 1008) and round(float(v5), 3) == 0.035 and t.seconds < 5
    criterion(2, "variance identity", ok, f"failures={len(bad)} n5s2={v5} t={t.seconds:.3f}s")
    assert ok


def test_c03_regret_values(criterion):
    with Timer() as t:
        post = posterior(PosteriorState(JEFFREYS, 5, 2))
        m = mean_variance(post)[0]
        r2 = log_score_regret(run_prob(post, 2), (1 - m) ** 2)
        r4 = log_score_regret(run_prob(post, 4), (1 - m) ** 4)
    ok = abs(r2 - 0.0026) <= 2e-4 and abs(r4 - 0.021) <= 2e-3 and t.seconds < 1
    criterion(3, "regret values", ok, f"k2={r2:.6f} k4={r4:.6f} t={t.seconds:.3f}s")
    assert ok


def test_c04_prior_pair(criterion):
    with Timer() as t:
        v1, v2 = run_prob(Beta(2, 2), 2), run_prob(Beta(1, 1), 2)
    ok = v1 == F(3, 10) and v2 == F(1, 3) and t.seconds < 1
    criterion(4, "prior pair check", ok, f"Beta(2,2)={v1} Beta(1,1)={v2}")
    assert ok


def test_c05_range_endpoints(criterion):
    lo, hi = predictive_range(F(1, 2), 2)
    point, two = range_endpoint_measures(F(1, 2))
    attained = run_prob(point, 2) == lo and run_prob(two, 2) == hi
    ok = (lo, hi) == (F(1, 4), F(1, 2)) and attained and hi / lo == 2
    criterion(5, "range endpoints", ok, f"range=({lo}, {hi}) attained={attained}")
    assert ok


def test_c06_motivating_example(criterion):
    spread = two_point_with_mean(F(1, 100), F(19, 100), F(1, 10))
    p = pattern_prob(spread, (1, 1, 1, 1))
    q = pattern_prob(PointMass(F(1, 10)), (1, 1, 1, 1))
    ok = abs(float(p) - 6.6e-4) <= 5e-5 and q == F(1, 10000) and p / q > 6
    criterion(6, "motivating example", ok, f"two_point={float(p):.4e} point={float(q):.0e} ratio={float(p / q):.3f}")
    assert ok


def _random_measure(rnd):
    if rnd.random() < 0.5:
        return Beta(F(rnd.randint(1, 50), rnd.randint(1, 10)), F(rnd.randint(1, 50), rnd.randint(1, 10)))
    locs = sorted({F(rnd.randint(0, 200), 200) for _ in range(rnd.randint(1, 5))})
    raw = [rnd.randint(1, 20) for _ in locs]
    return Discrete(tuple((x, F(w, sum(raw))) for x, w in zip(locs, raw)))


def test_c07_roundtrip_suite(criterion):
    rnd = random.Random(20240607)
    with Timer() as t:
        errors, not_cm = 0, 0
        for _ in range(200):
            rep = injectivity_roundtrip(_random_measure(rnd), rnd.randint(1, 16))
            errors += rep.max_error != 0
            not_cm += not check_complete_monotonicity(list(rep.runs), tol=0).passed
    ok = errors == 0 and not_cm == 0 and t.seconds < 30
    criterion(7, "roundtrip/injectivity suite", ok,
              f"nonzero_errors={errors} cm_failures={not_cm} t={t.seconds:.2f}s")
    assert ok


def test_c08_asymptotic_rate(criterion):
    thetas = (0.3, 0.5, 0.7)
    with Timer() as t:
        spec = ExperimentSpec(JEFFREYS, thetas, (50, 100, 200, 500, 1000, 2000), (2,), 200, 8)
        rows = discrepancy_experiment(spec)
        slopes = {th: loglog_slope(rows, th, k=2) for th in thetas}
        spec = ExperimentSpec(JEFFREYS, thetas, (100, 10_000), GrowingHorizon(1.0), 200, 8)
        grow = {(r.theta0, r.n): r for r in growing_horizon_experiment(spec)}
    rate_ok = all(abs(s + 1) <= 0.15 for s in slopes.values())
    ratios = {th: grow[(th, 10_000)].mean_gap / grow[(th, 100)].mean_gap for th in thetas}
    rel = {th: grow[(th, 10_000)].mean_relative_gap / grow[(th, 100)].mean_relative_gap for th in thetas}
    stable_ok = all(r > 0.5 for r in ratios.values())
    ok = rate_ok and stable_ok and t.seconds < 120
    criterion(8, "asymptotic rate", ok,
              "slopes=" + ",".join(f"{s:.3f}" for s in slopes.values())
              + " gap_ratio_1e4/1e2=" + ",".join(f"{r:.2e}" for r in ratios.values())
              + " relative_gap_ratio=" + ",".join(f"{r:.2f}" for r in rel.values())
              + f" t={t.seconds:.1f}s")
    assert ok


def test_c09_counterexample(criterion):
    sc = Counterexample()
    with Timer() as t:
        bounded = all(F(1, 4) <= run_path(sc, p).theta <= F(3, 4)
                      for n in range(13) for p in product((0, 1), repeat=n))
        witness = order_dependence_check(sc).witness
        reports = {p: cid_check(sc, 3, 4, 100_000, seed=31, path=p) for p in product((0, 1), repeat=3)}
    failed = ["".join(map(str, p)) for p, r in reports.items() if not r.passed]
    ok = (bounded and witness == (((1, 0), F(9, 16)), ((0, 1), F(7, 16))) and not failed
          and t.seconds < 60)
    criterion(9, "counterexample enumeration + c.i.d.", ok,
              f"bounded={bounded} witness_ok={witness == (((1, 0), F(9, 16)), ((0, 1), F(7, 16)))} "
              f"cid_failed_prefixes={failed} t={t.seconds:.1f}s")
    assert ok


def test_c10_stopping_distortion(criterion):
    with Timer() as t:
        post = posterior(PosteriorState(JEFFREYS, 5, 2))
        v = stopping_value_gap(post, 4)
        w = stopping_boundary_witness(post, 4)
    var = mean_variance(post)[1]
    ok = (v.gap == var == F(35, 1008) and abs(float(w.r) - 0.228) < 5e-4
          and (w.tau_star, w.tau_tilde) == (3, 2) and t.seconds < 1)
    criterion(10, "stopping distortion", ok,
              f"gap={v.gap} variance={var} r={float(w.r):.4f} tau*={w.tau_star} tau~*={w.tau_tilde}")
    assert ok


def test_c11_monte_carlo(criterion):
    rnd = random.Random(11)
    with Timer() as t:
        results = []
        for i in range(20):
            prior = _random_measure(rnd)
            n = rnd.randint(0, 20)
            try:
                post = posterior(PosteriorState(prior, n, rnd.randint(0, n)))
            except ValueError:
                post = prior
            pattern = tuple(rnd.randint(0, 1) for _ in range(rnd.randint(1, 6)))
            results.append(mc_pattern_check(post, pattern, 100_000, seed=1000 + i))
    worst = max(abs(r.z) for r in results)
    ok = all(r.passed for r in results) and t.seconds < 60
    criterion(11, "Monte Carlo cross-validation", ok,
              f"passed={sum(r.passed for r in results)}/20 max|z|={worst:.2f} t={t.seconds:.1f}s")
    assert ok
