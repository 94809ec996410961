"""Center selection and within-class nearest-neighbor search."""

import warnings
from dataclasses import dataclass

import numpy as np

from .dtw import dtw_one_to_many
from .exceptions import InsufficientNeighborsError

METRICS = ("dtw", "euclidean-flat")


def _check_metric(metric):
    if metric == "euclidean":
        return "euclidean-flat"
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    return metric


def distances_to(x, X, metric="dtw"):
    """Distances from one series `x` (L, M) to each row of `X` (P, L, M)."""
    metric = _check_metric(metric)
    if metric == "dtw":
        return dtw_one_to_many(x, X)
    x = np.asarray(x, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    if X.shape[1:] != x.shape:
        raise ValueError(
            f"euclidean-flat needs equal shapes, got {x.shape} and {X.shape[1:]}"
        )
    return np.linalg.norm((X - x).reshape(len(X), -1), axis=1)


@dataclass(frozen=True)
class NeighborSet:
    center: int
    neighbors: tuple
    distances: tuple


def select_centers(dataset, quota, rng):
    """Draw `quota.cnum` center positions uniformly from the quota's class.

    Draws are without replacement while ``cnum <= a`` and with replacement
    beyond that.

    Returns
    -------
    ndarray of int
        Dataset positions of the chosen centers, in draw order.
    """
    members = dataset.class_indices(quota.label)
    if quota.cnum <= 0:
        return np.empty(0, dtype=np.intp)
    replace = quota.cnum > len(members)
    return members[rng.choice(len(members), size=quota.cnum, replace=replace)]


class ClassDistanceCache:
    """Lazily computed, memoised distance rows within one class.

    Each center's row is computed once, against every member of its class,
    so repeated draws of the same center cost nothing.
    """

    def __init__(self, dataset, label, metric="dtw"):
        self.dataset = dataset
        self.metric = _check_metric(metric)
        self.members = dataset.class_indices(label)
        self._rows = {}

    def row(self, center):
        row = self._rows.get(center)
        if row is None:
            X = self.dataset.X
            row = distances_to(X[center], X[self.members], self.metric)
            self._rows[center] = row
        return row


def k_nearest_within_class(dataset, center, k, metric="dtw", cache=None):
    """The `k` same-class samples closest to `center`.

    Ties are broken by ascending dataset position.

    Parameters
    ----------
    dataset : Dataset
    center : int
        Dataset position of the center sample.
    k : int
    metric : {"dtw", "euclidean-flat"}
    cache : ClassDistanceCache, optional
        Reused distance rows for the center's class.

    Raises
    ------
    InsufficientNeighborsError
        If the class has fewer than ``k + 1`` members.
    """
    label = dataset.y[center]
    if cache is None:
        cache = ClassDistanceCache(dataset, label, metric)
    members = cache.members
    if len(members) < k + 1:
        raise InsufficientNeighborsError(
            f"class {label!r} has {len(members)} members; k={k} needs {k + 1}"
        )
    dist = cache.row(center)
    keep = members != center
    cand, cand_dist = members[keep], dist[keep]
    order = np.lexsort((cand, cand_dist))[:k]
    return NeighborSet(
        int(center),
        tuple(int(i) for i in cand[order]),
        tuple(float(d) for d in cand_dist[order]),
    )


def effective_k(class_size, k, label=None):
    """Clamp `k` to ``class_size - 1`` with a warning; 0 means no neighbor exists."""
    if class_size - 1 >= k:
        return k
    k_eff = max(class_size - 1, 0)
    warnings.warn(
        f"class {label!r} has {class_size} member(s); using k={k_eff} instead of k={k}",
        RuntimeWarning,
        stacklevel=2,
    )
    return k_eff
