"""Input validation shared by the estimator API."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .errors import PredictiveError
from .measures import Beta, Discrete, PointMass, parse_measure
from .predictive import MAX_ENUMERATION_K


def check_binary_sequence(X) -> np.ndarray:
    """Return a 1-D int array of 0/1 observations.

    Accepts shape ``(n,)`` or a single column ``(n, 1)``.  An empty sequence
    is allowed (no data yet).
    """
    arr = np.asarray(X)
    if arr.size == 0:
        return np.zeros(0, dtype=np.int64)
    arr = check_array(arr, ensure_2d=False, dtype=None)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise PredictiveError(f"expected a single column of observations, got shape {arr.shape}")
        arr = arr[:, 0]
    if not np.all(np.isin(arr, (0, 1))):
        raise PredictiveError("observations must be 0 or 1")
    return arr.astype(np.int64)


def check_patterns(P) -> np.ndarray:
    """Return a 2-D int array whose rows are future patterns of equal length."""
    arr = np.asarray(P)
    if arr.ndim == 1:
        arr = arr[None, :]
    arr = check_array(arr, dtype=None)
    if arr.shape[1] > MAX_ENUMERATION_K:
        raise PredictiveError(f"pattern length limited to {MAX_ENUMERATION_K}")
    if not np.all(np.isin(arr, (0, 1))):
        raise PredictiveError("pattern entries must be 0 or 1")
    return arr.astype(np.int64)


def check_prior(prior):
    if isinstance(prior, (Beta, Discrete, PointMass)):
        return prior
    if isinstance(prior, str):
        return parse_measure(prior)
    raise PredictiveError(f"prior must be a mixing measure or a spec string, got {prior!r}")
