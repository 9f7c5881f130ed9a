"""scikit-learn style wrappers.

:class:`RipsBetti` turns each point cloud of a collection into its Betti
vector at a fixed scale, so it can sit in a pipeline or a grid search over
``beta``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .complex import rips_complex
from .homology import betti_numbers
from .metric import FiniteMetricSpace


class RipsBetti(TransformerMixin, BaseEstimator):
    """Betti numbers of the Vietoris-Rips complex of each input cloud.

    Parameters
    ----------
    beta : float, default=1.0
        Strict scale: simplices have diameter ``< beta``.
    max_dim : int, default=2
        Highest Betti number reported; the complex is built one dimension higher.
    metric : {"euclidean", "precomputed"}, default="euclidean"
        With ``"precomputed"`` each input is a square distance matrix.

    Attributes
    ----------
    n_features_in_ : int
        Ambient dimension seen in ``fit`` (euclidean metric only).
    """

    def __init__(self, beta=1.0, max_dim=2, metric="euclidean"):
        self.beta = beta
        self.max_dim = max_dim
        self.metric = metric

    def _metric_space(self, X) -> FiniteMetricSpace:
        arr = check_array(X, dtype=float)
        if self.metric == "precomputed":
            return FiniteMetricSpace(arr)
        if self.metric != "euclidean":
            raise ValueError(f"unknown metric {self.metric!r}")
        return FiniteMetricSpace.from_points(arr)

    def fit(self, X, y=None):
        """Validate parameters and record the ambient dimension."""
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if int(self.max_dim) < 0:
            raise ValueError("max_dim must be non-negative")
        if self.metric not in ("euclidean", "precomputed"):
            raise ValueError(f"unknown metric {self.metric!r}")
        clouds = list(X)
        if not clouds:
            raise ValueError("need at least one point cloud")
        if self.metric == "euclidean":
            dims = {check_array(c, dtype=float).shape[1] for c in clouds}
            if len(dims) != 1:
                raise ValueError("point clouds have different ambient dimensions")
            self.n_features_in_ = dims.pop()
        self.fitted_ = True
        return self

    def transform(self, X):
        """Array of shape ``(n_clouds, max_dim + 1)`` with the Betti numbers."""
        check_is_fitted(self, "fitted_")
        out = np.zeros((len(X), int(self.max_dim) + 1), dtype=int)
        for i, cloud in enumerate(X):
            ms = self._metric_space(cloud)
            if self.metric == "euclidean" and ms.n and np.asarray(cloud).shape[1] != self.n_features_in_:
                raise ValueError("ambient dimension differs from the one seen in fit")
            K = rips_complex(ms, self.beta, max_dim=int(self.max_dim) + 1)
            out[i] = betti_numbers(K, int(self.max_dim)).betti
        return out
