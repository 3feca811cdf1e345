"""scikit-learn style estimators for the hierarchical methods.

>>> import numpy as np
>>> D = np.array([[0, 1, 3], [1, 0, 2], [3, 2, 0]])
>>> LinkageClustering(linkage="complete", n_clusters=2).fit(D).labels_
array([0, 0, 1])
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from .methods import MethodId, parse_method
from .metric import Dendrogram, Partition, dendrogram_to_ultrametric
from .validation import check_alpha, check_distance_matrix

__all__ = ["LinkageClustering", "UnchainingClustering", "cut_dendrogram"]


def cut_dendrogram(dend: Dendrogram, n_clusters=None, distance_threshold=None) -> Partition:
    """Flat clustering read off a dendrogram.

    With ``distance_threshold`` the level in force at that height is used
    (merges at exactly the threshold are included). Otherwise the lowest level
    with at most ``n_clusters`` blocks is used.
    """
    if distance_threshold is not None:
        return dend.at(distance_threshold)
    if n_clusters is None or n_clusters < 1:
        raise ValueError("n_clusters must be a positive integer")
    for level in dend.levels:
        if len(level) <= n_clusters:
            return level
    return dend.levels[-1]


class _DendrogramClustering(ClusterMixin, BaseEstimator):
    def _method(self) -> MethodId:
        raise NotImplementedError

    def _check_params(self):
        if self.distance_threshold is None and (
            isinstance(self.n_clusters, bool) or not isinstance(self.n_clusters, (int, np.integer)) or self.n_clusters < 1
        ):
            raise ValueError(f"n_clusters must be a positive integer, got {self.n_clusters!r}")
        if self.distance_threshold is not None and self.distance_threshold < 0:
            raise ValueError("distance_threshold must be nonnegative")

    def fit(self, X, y=None):
        """Build the dendrogram of ``X`` and a flat labelling.

        Parameters
        ----------
        X : array_like or FiniteMetricSpace
            Distance matrix (``metric="precomputed"``) or points.
        y : ignored

        Returns
        -------
        self
        """
        self._check_params()
        method = self._method()
        space = check_distance_matrix(X, self.metric, self.exact)
        dend = method.run(space)
        self.method_ = method
        self.space_ = space
        self.dendrogram_ = dend
        self.ultrametric_ = dendrogram_to_ultrametric(dend)
        self.heights_ = np.array([float(h) for h in dend.heights])
        self.n_leaves_ = space.n
        self.labels_ = self._labels(cut_dendrogram(dend, self.n_clusters, self.distance_threshold))
        self.n_clusters_ = int(self.labels_.max()) + 1 if space.n else 0
        return self

    @staticmethod
    def _labels(partition: Partition):
        return np.asarray(partition.labels(), dtype=np.intp)

    def labels_at(self, t):
        """Flat labels of the fitted dendrogram at height ``t``."""
        check_is_fitted(self, "dendrogram_")
        return self._labels(self.dendrogram_.at(t))

    def ultrametric_matrix(self):
        """The output ultrametric as a float array."""
        check_is_fitted(self, "ultrametric_")
        return self.ultrametric_.to_numpy()


class LinkageClustering(_DendrogramClustering):
    """Single, complete or average linkage with simultaneous tie merging.

    Parameters
    ----------
    linkage : {"single", "complete", "average"}
    n_clusters : int, default=2
        Used for ``labels_`` when ``distance_threshold`` is None.
    distance_threshold : float, optional
        Cut height for ``labels_``.
    metric : {"precomputed", "euclidean"}
    exact : bool
        Work in rational arithmetic.

    Attributes
    ----------
    dendrogram_ : Dendrogram
    ultrametric_ : Ultrametric
    labels_ : ndarray of shape (n_samples,)
    heights_ : ndarray
        Merge heights, starting at 0.
    """

    def __init__(self, linkage="single", n_clusters=2, distance_threshold=None, metric="precomputed", exact=False):
        self.linkage = linkage
        self.n_clusters = n_clusters
        self.distance_threshold = distance_threshold
        self.metric = metric
        self.exact = exact

    def _method(self):
        if self.linkage not in ("single", "complete", "average"):
            raise ValueError(f"linkage must be single, complete or average, got {self.linkage!r}")
        return parse_method(self.linkage)


class UnchainingClustering(_DendrogramClustering):
    """Single linkage gated by Rips-complex dimension to resist chaining.

    Two clusters merge at scale ``t`` only if some simplex of the Rips
    complex at ``t`` crosses between them with dimension at least
    ``min(dim A, dim B) / alpha``. With ``star=True`` only blocks of
    comparable size (within a factor ``alpha``) merge freely.

    Parameters
    ----------
    alpha : real, default=1
        Must be ``>= 1``; larger values are more permissive.
    star : bool, default=False
        Use the size-aware variant.
    n_clusters, distance_threshold, metric, exact
        As in :class:`LinkageClustering`.
    """

    def __init__(self, alpha=1, star=False, n_clusters=2, distance_threshold=None, metric="precomputed", exact=False):
        self.alpha = alpha
        self.star = star
        self.n_clusters = n_clusters
        self.distance_threshold = distance_threshold
        self.metric = metric
        self.exact = exact

    def _method(self):
        alpha = check_alpha(self.alpha)
        return MethodId("SLstarAlpha" if self.star else "SLalpha", alpha)
