"""Predictive moment hierarchy for exchangeable Bernoulli sequences.

k-step predictives as posterior moments, the run/moment binomial transform,
plug-in versus Bayes gaps and regrets, exact Jeffreys (Hill) predictives,
martingale-scheme simulators and stopping distortion.
"""

from .beta_exact import (JEFFREYS, UNIFORM, BetaParams, beta_moment, beta_posterior_variance,
                         comparison_table, hill_one_step, hill_run_prob, rising_factorial)
from .dynamics import (BayesMean, Counterexample, ExperimentSpec, GrowingHorizon, LearningRate,
                       cid_check, discrepancy_experiment, growing_horizon_experiment,
                       order_dependence_check, step_scheme, stopping_boundary_witness,
                       stopping_value_gap)
from .errors import (DegeneratePosterior, DomainError, InvalidBracket, InvalidCounts,
                     NoWitness, PredictiveError, UnknownFigure)
from .estimator import ExchangeableBernoulliPredictor
from .hierarchy import (check_complete_monotonicity, injectivity_roundtrip, moments_from_runs,
                        runs_from_moments)
from .measures import (Beta, Discrete, PointMass, PosteriorState, mean_variance, moment,
                       parse_measure, posterior, two_point_with_mean)
from .predictive import (Entropy, Indicator, Pattern, Power, gap_report, nonid_witness,
                         pattern_prob, predictive_range, run_prob)
from .scoring import (bernoulli_kl, brier_regret, fisher_info, kl_quadratic_error,
                      log_score_regret, sanov_posterior_density)

__version__ = "0.1.0"
