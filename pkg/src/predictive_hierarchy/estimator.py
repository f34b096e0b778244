"""scikit-learn style front end.

>>> est = ExchangeableBernoulliPredictor(prior="jeffreys").fit([0, 1, 0, 0, 1])
>>> float(est.predict_run_proba(2))
0.375
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_binary_sequence, check_patterns, check_prior
from .hierarchy import runs_from_moments
from .measures import PointMass, PosteriorState, mean_variance, moments, posterior


class ExchangeableBernoulliPredictor(BaseEstimator):
    """Posterior predictive for the next ``k`` bits of an exchangeable 0/1 sequence.

    Parameters
    ----------
    prior : str or mixing measure, default="jeffreys"
        De Finetti prior.  Strings use the ``beta:a,b`` / ``point:m`` /
        ``discrete:x,w;...`` grammar or a named prior.
    plugin : bool, default=False
        If True, predict with a point mass at the posterior mean instead of
        the full posterior.  Useful as the baseline the Bayes rule dominates.

    Attributes
    ----------
    n_, s_ : int
        Number of observations and of ones seen so far.
    posterior_ : mixing measure
    mean_, variance_ : posterior mean and variance
    """

    def __init__(self, prior="jeffreys", plugin=False):
        self.prior = prior
        self.plugin = plugin

    def fit(self, X, y=None):
        x = check_binary_sequence(X)
        self.prior_ = check_prior(self.prior)
        self.n_, self.s_ = 0, 0
        return self._update(x)

    def partial_fit(self, X, y=None):
        if not hasattr(self, "posterior_"):
            return self.fit(X)
        return self._update(check_binary_sequence(X))

    def _update(self, x):
        self.n_ += int(x.size)
        self.s_ += int(x.sum())
        self.posterior_ = posterior(PosteriorState(self.prior_, self.n_, self.s_))
        self.mean_, self.variance_ = mean_variance(self.posterior_)
        return self

    @property
    def predictive_measure_(self):
        check_is_fitted(self, "posterior_")
        if self.plugin:
            return PointMass(self.mean_, exact=self.posterior_.exact)
        return self.posterior_

    def predict_proba(self, patterns):
        """Probability of each row of ``patterns`` as the next ``k`` bits."""
        P = check_patterns(patterns)
        measure = self.predictive_measure_
        k = P.shape[1]
        return np.array([float(measure.mixed_moment(int(s), k - int(s))) for s in P.sum(axis=1)])

    def predict_run_proba(self, k):
        """Probability that the next ``k`` bits are all zero (scalar or array of k)."""
        measure = self.predictive_measure_
        ks = np.atleast_1d(np.asarray(k, dtype=np.int64))
        if np.any(ks < 1):
            raise ValueError("horizons must be at least 1")
        out = np.array([float(measure.mixed_moment(0, int(j))) for j in ks])
        return out[0] if np.ndim(k) == 0 else out

    def score(self, patterns, y=None):
        """Mean log predictive probability of the observed future blocks (nats)."""
        return float(np.mean(np.log(self.predict_proba(patterns))))

    def moments(self, K):
        return moments(self.predictive_measure_, K)

    def run_probabilities(self, K):
        return runs_from_moments(self.moments(K))
