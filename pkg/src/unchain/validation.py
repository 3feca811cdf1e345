"""Input checks shared by the estimators."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.metrics import pairwise_distances
from sklearn.utils import check_array

from .formats import parse_number
from .metric import FiniteMetricSpace, validate_metric

__all__ = ["check_distance_matrix", "check_alpha", "check_metric_space"]

_METRICS = ("precomputed", "euclidean")


def _to_exact(value):
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return value
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, str):
        return parse_number(value, exact=True)
    # Floats are read through their shortest decimal form, so 0.1 becomes 1/10.
    return parse_number(repr(float(value)), exact=True)


def check_distance_matrix(X, metric: str = "precomputed", exact: bool = False, labels=None) -> FiniteMetricSpace:
    """Turn estimator input into a validated :class:`FiniteMetricSpace`.

    Parameters
    ----------
    X : array_like or FiniteMetricSpace
        A square distance matrix when ``metric="precomputed"``, otherwise an
        ``(n_samples, n_features)`` array of points.
    metric : {"precomputed", "euclidean"}
    exact : bool
        Convert entries to ``int``/``Fraction`` (decimal reading of floats).
        Matrices holding ``Fraction`` or numeric strings need this.
    labels : sequence, optional
        Point identifiers.

    Raises
    ------
    ValueError
        For an unknown ``metric``, and through the metric axiom errors.
    """
    if isinstance(X, FiniteMetricSpace):
        return X
    if metric not in _METRICS:
        raise ValueError(f"metric must be one of {_METRICS}, got {metric!r}")
    if metric == "euclidean":
        pts = check_array(X, dtype=np.float64, ensure_min_samples=1)
        D = np.triu(pairwise_distances(pts, metric="euclidean"), 1)
        # The fast formula is not bitwise symmetric.
        D = D + D.T
        rows = [[_to_exact(v) for v in r] for r in D] if exact else D.tolist()
        # Euclidean matrices are metrics; rounding may still break the exact scan.
        return validate_metric(labels, rows, check_triangle=False)
    if exact:
        rows = [[_to_exact(v) for v in r] for r in X]
        return validate_metric(labels, rows)
    D = check_array(X, dtype=np.float64, ensure_all_finite=False, ensure_min_samples=1, ensure_min_features=1)
    return validate_metric(labels, D.tolist())


def check_alpha(alpha):
    """Return ``alpha`` if it is a real number ``>= 1``."""
    if isinstance(alpha, bool) or not isinstance(alpha, (int, float, Fraction, np.integer, np.floating)):
        raise ValueError(f"alpha must be a real number >= 1, got {alpha!r}")
    if not alpha >= 1:
        raise ValueError(f"alpha must be >= 1, got {alpha!r}")
    return int(alpha) if isinstance(alpha, np.integer) else alpha


def check_metric_space(space) -> FiniteMetricSpace:
    if not isinstance(space, FiniteMetricSpace):
        raise TypeError(f"expected a FiniteMetricSpace, got {type(space).__name__}")
    return space
