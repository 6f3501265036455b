"""scikit-learn compatible wrappers around the ordinal estimators."""
from __future__ import annotations

import logging
from math import factorial

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._errors import InvalidArgumentError
from ._validation import check_order
from .entropy import empirical_permutation_entropy, entropy_rate_estimate
from .patterns import rank_sequence

logger = logging.getLogger(__name__)


class OrdinalPatternEncoder(TransformerMixin, BaseEstimator):
    """Encode each column of a multivariate series as ordinal-pattern ranks.

    Parameters
    ----------
    order : int, default=3
        Pattern order ``d``; windows hold ``d + 1`` values.
    delay : int, default=1
        Spacing between window entries.

    Attributes
    ----------
    n_features_in_ : int
        Number of series (columns) seen in :meth:`fit`.
    n_patterns_ : int
        ``(order + 1)!``, the size of the rank alphabet.
    """

    def __init__(self, order=3, delay=1):
        self.order = order
        self.delay = delay

    def _check_params(self):
        check_order(self.order, "order")
        check_order(self.delay, "delay")

    def fit(self, X, y=None):
        self._check_params()
        X = check_array(X, ensure_2d=False, dtype=float)
        self.n_features_in_ = 1 if X.ndim == 1 else X.shape[1]
        self.n_patterns_ = factorial(self.order + 1)
        return self

    def transform(self, X):
        """Ranks of shape ``(n_timesteps - order * delay, n_series)``.

        One-dimensional input gives a one-dimensional result.
        """
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, ensure_2d=False, dtype=float)
        if X.ndim == 1:
            return rank_sequence(X, self.order, self.delay)
        if X.shape[1] != self.n_features_in_:
            raise InvalidArgumentError(
                f"X has {X.shape[1]} series, encoder was fitted on {self.n_features_in_}")
        return np.column_stack([rank_sequence(X[:, j], self.order, self.delay)
                                for j in range(X.shape[1])])


class PermutationEntropy(TransformerMixin, BaseEstimator):
    """Feature extractor mapping each row (one series) to its permutation entropy.

    The value is the plug-in estimate ``-(1/d) sum p ln p`` in nats.  Use it
    inside a :class:`~sklearn.pipeline.Pipeline` like any stateless
    transformer.

    Parameters
    ----------
    order : int, default=3
    delay : int, default=1
    """

    def __init__(self, order=3, delay=1):
        self.order = order
        self.delay = delay

    def fit(self, X, y=None):
        check_order(self.order, "order")
        check_order(self.delay, "delay")
        X = check_array(X, dtype=float)
        if X.shape[1] < self.order * self.delay + 1:
            raise InvalidArgumentError(
                f"series of length {X.shape[1]} too short for order {self.order}, delay {self.delay}")
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, dtype=float)
        return np.array([[empirical_permutation_entropy(row, self.order, self.delay).permutation_entropy]
                         for row in X])

    def get_feature_names_out(self, input_features=None):
        return np.array(["permutation_entropy"], dtype=object)


class OrdinalEntropyRate(BaseEstimator):
    """Entropy rate of pattern words fitted on a single series.

    After :meth:`fit`, ``rate_table_`` holds ``(t, H_t, H_t/t, H_t - H_{t-1})``
    rows for words of ``t = 1..t_max`` consecutive patterns and
    ``entropy_rate_`` the last increment.
    """

    def __init__(self, order=3, delay=1, t_max=4):
        self.order = order
        self.delay = delay
        self.t_max = t_max

    def fit(self, X, y=None):
        check_order(self.t_max, "t_max")
        x = check_array(X, ensure_2d=False, dtype=float)
        if x.ndim != 1:
            raise InvalidArgumentError("OrdinalEntropyRate fits a single 1-D series")
        ranks = rank_sequence(x, self.order, self.delay)
        self.rate_table_ = entropy_rate_estimate(ranks, self.t_max)
        self.entropy_rate_ = self.rate_table_[-1].increment
        self.permutation_entropy_ = self.rate_table_[0].block_entropy / self.order
        # asymptotically the rate never exceeds the permutation entropy; finite samples may disagree
        logger.info("order=%d permutation_entropy=%.6g entropy_rate=%.6g rate<=pe:%s",
                    self.order, self.permutation_entropy_, self.entropy_rate_,
                    self.entropy_rate_ <= self.permutation_entropy_)
        return self
