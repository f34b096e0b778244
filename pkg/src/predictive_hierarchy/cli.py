"""Command-line entry point: ``predictive-hierarchy <verb> ...``.

Exit status is 0 on success, 1 on a domain error (message on stderr) and 2
on a usage error.  Numbers print with 12 significant digits unless
``--exact`` asks for rational strings.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import checks
from .beta_exact import BetaParams, comparison_table
from .dynamics import (BayesMean, Counterexample, ExperimentSpec, GrowingHorizon, LearningRate,
                       cid_check, discrepancy_experiment, growing_horizon_experiment,
                       order_dependence_check, step_scheme, stopping_boundary_witness,
                       stopping_value_gap)
from .errors import PredictiveError
from .figures import FIGURES, REGRET_HEADER, figure_data, regret_sweep
from .hierarchy import check_complete_monotonicity, injectivity_roundtrip, moments_from_runs
from .measures import Beta, PosteriorState, mean_variance, parse_measure, posterior
from .output import read_sequence_csv, render
from .predictive import (Entropy, Indicator, Pattern, Power, gap_report, nonid_witness,
                         pattern_prob, predictive_range, range_endpoint_measures, run_prob)


class _Parser(argparse.ArgumentParser):
    """Usage errors list the valid flags of the offending verb."""

    def error(self, message):
        self.print_usage(sys.stderr)
        flags = sorted({s for a in self._actions for s in a.option_strings})
        hint = f"\nvalid flags: {' '.join(flags)}" if flags else ""
        self.exit(2, f"{self.prog}: error: {message}{hint}\n")


def _int_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _bits(text: str) -> tuple:
    return Pattern.parse(text.replace(",", "")).bits if text else ()


def _common(p, exact=True):
    p.add_argument("--format", choices=("table", "csv", "json"), default="csv")
    p.add_argument("--output", help="write to this file instead of stdout")
    if exact:
        p.add_argument("--exact", action="store_true", help="print rationals instead of decimals")


def _posterior_args(p):
    p.add_argument("--prior", default="jeffreys")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--s", type=int, default=0)


def _posterior(args):
    return posterior(PosteriorState(parse_measure(args.prior), args.n, args.s))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="predictive-hierarchy",
                     description="Predictive moment hierarchy for exchangeable 0/1 sequences.")
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = verbs.add_parser("table3", help="plug-in vs Bayes run probabilities under a Beta prior")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--prior", default="jeffreys", help="beta:a,b with half-integer a, b")
    _common(p)

    p = verbs.add_parser("predict", help="predictive probabilities and identifiability")
    sub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = sub.add_parser("pattern", help="probability of a future 0/1 pattern")
    _posterior_args(q)
    q.add_argument("--pattern", required=True)
    _common(q)
    q = sub.add_parser("run", help="run probabilities for k = 1..K")
    _posterior_args(q)
    q.add_argument("--K", type=int, required=True)
    _common(q)
    q = sub.add_parser("gap", help="Bayes minus plug-in run probability")
    _posterior_args(q)
    q.add_argument("--K", type=int, required=True)
    _common(q)
    q = sub.add_parser("range", help="attainable run probabilities at a fixed mean, k = 2..K")
    q.add_argument("--m", type=_rational, required=True)
    q.add_argument("--K", type=int, required=True)
    _common(q)
    q = sub.add_parser("witness", help="two measures with equal mean and different functional")
    q.add_argument("--m", type=_rational, required=True)
    q.add_argument("--a", type=_rational, required=True)
    q.add_argument("--b", type=_rational, required=True)
    q.add_argument("--functional", default="power:2",
                   help="power:k, ones:k, indicator:t or entropy")
    _common(q)

    p = verbs.add_parser("hierarchy", help="moment/run transform")
    sub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = sub.add_parser("invert", help="runs (index,value CSV) to moments")
    q.add_argument("--input", required=True, help="CSV file of index,value rows, or - for stdin")
    _common(q)
    q = sub.add_parser("check-cm", help="complete-monotonicity screen of a run sequence")
    q.add_argument("--input", required=True)
    q.add_argument("--max-order", type=int)
    q.add_argument("--tol", type=float)
    _common(q)
    q = sub.add_parser("roundtrip", help="moments to runs and back")
    q.add_argument("--prior", required=True)
    q.add_argument("--K", type=int, required=True)
    q.add_argument("--float", dest="float_mode", action="store_true")
    _common(q)

    p = verbs.add_parser("regret", help="scoring-rule regret of the plug-in forecast")
    sub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = sub.add_parser("sweep")
    q.add_argument("--prior", default="jeffreys")
    q.add_argument("--n-list", type=_int_list, required=True)
    q.add_argument("--k-list", type=_int_list, required=True)
    q.add_argument("--ratio", type=_rational, default=Fraction(2, 5), help="s/n (default 2/5)")
    _common(q)

    p = verbs.add_parser("simulate", help="martingale update schemes")
    sub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = sub.add_parser("scheme")
    q.add_argument("--scheme", choices=("counterexample", "harmonic", "power", "bayes"),
                   required=True)
    q.add_argument("--theta0", type=_rational, default=Fraction(1, 2))
    q.add_argument("--c", type=_rational, default=Fraction(1))
    q.add_argument("--alpha", type=_rational, default=Fraction(1))
    q.add_argument("--prior", default="jeffreys", help="prior for the bayes scheme")
    q.add_argument("--path", default="", help="observed bits, e.g. 1,0,1 or 101")
    q.add_argument("--order-check", type=int, metavar="LEN",
                   help="enumerate all paths up to LEN and report an order witness")
    q.add_argument("--cid", type=int, metavar="HORIZON",
                   help="Monte Carlo check of E[X_{n+j} | F_n] for j = 1..HORIZON")
    q.add_argument("--replications", type=int, default=100_000)
    q.add_argument("--seed", type=int)
    _common(q)

    p = verbs.add_parser("experiment", help="seeded asymptotic sweeps")
    sub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    for name in ("gap", "horizon"):
        q = sub.add_parser(name)
        q.add_argument("--seed", type=int, required=True)
        q.add_argument("--prior", default="jeffreys")
        q.add_argument("--theta0", type=_float_list, default=[0.3, 0.5, 0.7])
        q.add_argument("--n-grid", type=_int_list, required=True)
        q.add_argument("--replications", type=int, default=200)
        if name == "gap":
            q.add_argument("--k", type=_int_list, default=[2])
        else:
            q.add_argument("--c", type=float, default=1.0)
            q.add_argument("--rule", choices=("sqrt", "log"), default="sqrt")
        _common(q, exact=False)

    p = verbs.add_parser("stopping", help="optimal-stopping distortion")
    sub = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    q = sub.add_parser("gap")
    _posterior_args(q)
    q.add_argument("--K", type=int, required=True)
    _common(q)
    q = sub.add_parser("witness")
    _posterior_args(q)
    q.add_argument("--K", type=int, required=True)
    q.add_argument("--tau0", type=int)
    _common(q)

    p = verbs.add_parser("figure", help="data behind a figure, as CSV")
    p.add_argument("figure_id", help=", ".join(FIGURES))
    p.add_argument("--seed", type=int)
    p.add_argument("--replications", type=int, default=200)
    _common(p)

    p = verbs.add_parser("verify", help="run the built-in property suite")
    p.add_argument("--quiet", action="store_true")
    return parser


# -- verbs ---------------------------------------------------------------------

def _table3(args):
    prior = parse_measure(args.prior)
    if not isinstance(prior, Beta) or not prior.exact:
        raise PredictiveError("table3 needs a Beta prior with rational parameters")
    a2, b2 = 2 * prior.alpha, 2 * prior.beta
    if a2.denominator != 1 or b2.denominator != 1:
        raise PredictiveError("table3 needs half-integer Beta parameters")
    rows = comparison_table(args.n, args.s, args.kmax, BetaParams(int(a2), int(b2)))
    header = ("k", "plugin", "bayes", "relative_gap")
    if args.exact:
        return header, [r.exact_strings() for r in rows], ()
    return header, [r.rendered() for r in rows], ()


def _functional(text: str):
    kind, _, arg = text.partition(":")
    if kind == "power":
        return Power(int(arg))
    if kind == "ones":
        return Power(int(arg), ones=True)
    if kind == "indicator":
        return Indicator(Fraction(arg))
    if kind == "entropy":
        return Entropy()
    raise PredictiveError(f"unknown functional {text!r}")


def _predict(args):
    if args.what == "pattern":
        post = _posterior(args)
        pat = Pattern.parse(args.pattern)
        return ("pattern", "probability"), [("".join(map(str, pat.bits)), pattern_prob(post, pat))], ()
    if args.what == "run":
        post = _posterior(args)
        return ("k", "run_prob"), [(k, run_prob(post, k)) for k in range(1, args.K + 1)], ()
    if args.what == "gap":
        post = _posterior(args)
        header = ("k", "bayes", "plugin", "gap", "upper_bound", "variance")
        rows = []
        for k in range(1, args.K + 1):
            g = gap_report(post, k)
            rows.append((k, g.bayes, g.plugin, g.gap, g.upper_bound, g.variance))
        return header, rows, ()
    if args.what == "range":
        header = ("k", "lo", "hi", "lo_attained", "hi_attained")
        point, two = range_endpoint_measures(args.m)
        rows = []
        for k in range(2, args.K + 1):
            lo, hi = predictive_range(args.m, k)
            rows.append((k, lo, hi, run_prob(point, k) == lo, run_prob(two, k) == hi))
        return header, rows, ()
    w = nonid_witness(args.m, _functional(args.functional), (args.a, args.b))
    atoms = ";".join(f"{x},{p}" for x, p in w.spread.atoms)
    header = ("measure", "mean", "functional_value")
    rows = [(f"point:{w.point.location}", args.m, w.point_value),
            (f"discrete:{atoms}", args.m, w.spread_value)]
    return header, rows, ()


def _read_input(path: str) -> list:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    try:
        return read_sequence_csv(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise PredictiveError(f"bad sequence file: {exc}") from None


def _hierarchy(args):
    if args.what == "invert":
        mu = moments_from_runs(_read_input(args.input))
        return ("index", "moment"), list(enumerate(mu)), ()
    if args.what == "check-cm":
        verdict = check_complete_monotonicity(_read_input(args.input), args.max_order, args.tol)
        m, k, val = verdict.witness if verdict.witness else ("", "", "")
        return (("passed", "checked_order", "witness_m", "witness_k", "witness_delta"),
                [(verdict.passed, verdict.checked_order, m, k, val)], ())
    prior = parse_measure(args.prior, exact=not args.float_mode)
    rep = injectivity_roundtrip(prior, args.K)
    header = ("k", "moment", "run", "reconstructed")
    rows = [(k, rep.moments[k], rep.runs[k], rep.reconstructed[k]) for k in range(args.K + 1)]
    return header, rows, (f"max_error={rep.max_error}", f"exact={str(rep.exact).lower()}")


def _regret(args):
    prior = parse_measure(args.prior)
    rows = regret_sweep(prior, args.n_list, args.k_list, ratio=args.ratio)
    return REGRET_HEADER, rows, ()


def _scheme(args):
    if args.scheme == "counterexample":
        return Counterexample()
    if args.scheme == "harmonic":
        return LearningRate.one_over_n_plus_c(args.c, args.theta0)
    if args.scheme == "power":
        return LearningRate.power(args.alpha, args.theta0)
    return BayesMean(parse_measure(args.prior))


def _simulate(args):
    scheme = _scheme(args)
    path = _bits(args.path)
    if args.order_check is not None:
        v = order_dependence_check(scheme, args.order_check)
        if v.consistent:
            return ("consistent", "path_a", "theta_a", "path_b", "theta_b"), [(True, "", "", "", "")], ()
        (pa, ta), (pb, tb) = v.witness
        row = (False, "".join(map(str, pa)), ta, "".join(map(str, pb)), tb)
        return ("consistent", "path_a", "theta_a", "path_b", "theta_b"), [row], ()
    if args.cid is not None:
        if args.seed is None:
            raise PredictiveError("--cid needs --seed")
        rep = cid_check(scheme, len(path), args.cid, args.replications, args.seed, path=path)
        rows = [(j + 1, rep.theta_n, e, se, bool(abs(e - rep.theta_n) <= 3 * se))
                for j, (e, se) in enumerate(zip(rep.estimates, rep.standard_errors))]
        comments = (f"seed={args.seed}", f"replications={args.replications}",
                    f"passed={str(rep.passed).lower()}")
        return ("j", "theta_n", "estimate", "se", "within_3se"), rows, comments
    state = scheme.initial()
    rows = [(state.n, "", state.s, state.theta)]
    for x in path:
        state = step_scheme(scheme, state, x)
        rows.append((state.n, x, state.s, state.theta))
    return ("n", "x", "s", "theta"), rows, ()


def _experiment(args):
    prior = parse_measure(args.prior, exact=False)
    if args.what == "gap":
        spec = ExperimentSpec(prior, args.theta0, args.n_grid, tuple(args.k), args.replications,
                              args.seed)
        result = discrepancy_experiment(spec)
    else:
        spec = ExperimentSpec(prior, args.theta0, args.n_grid, GrowingHorizon(args.c, args.rule),
                              args.replications, args.seed)
        result = growing_horizon_experiment(spec)
    header = ("theta0", "n", "k", "mean_gap", "se", "mean_relative_gap", "relative_se")
    rows = [(r.theta0, r.n, r.k, r.mean_gap, r.se, r.mean_relative_gap, r.relative_se)
            for r in result]
    return header, rows, (f"seed={args.seed}", f"replications={args.replications}")


def _stopping(args):
    post = _posterior(args)
    if args.what == "gap":
        v = stopping_value_gap(post, args.K)
        var = mean_variance(post)[1]
        return (("value", "plugin_value", "gap", "variance", "argmax"),
                [(v.value, v.plugin_value, v.gap, var, v.argmax)], ())
    w = stopping_boundary_witness(post, args.K, args.tau0)
    return (("r", "tau_star", "tau_tilde", "tau0", "bayes_at_tau0", "plugin_at_tau0"),
            [(w.r, w.tau_star, w.tau_tilde, w.tau0, w.bayes_at_tau0, w.plugin_at_tau0)], ())


def _figure(args):
    return figure_data(args.figure_id, seed=args.seed, replications=args.replications)


DISPATCH = {"table3": _table3, "predict": _predict, "hierarchy": _hierarchy, "regret": _regret,
            "simulate": _simulate, "experiment": _experiment, "stopping": _stopping,
            "figure": _figure}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.verb == "verify":
        _, failed = checks.run_all(verbose=not args.quiet)
        return 1 if failed else 0
    try:
        header, rows, comments = DISPATCH[args.verb](args)
        text = render(header, rows, fmt=args.format, exact=getattr(args, "exact", False),
                      comments=comments)
    except (PredictiveError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
