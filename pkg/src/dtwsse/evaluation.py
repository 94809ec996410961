"""One-nearest-neighbor classification for quick end-to-end sanity checks."""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .core import _sort_labels
from .neighbors import distances_to
from .validation import check_series_array


class OneNearestNeighborClassifier(ClassifierMixin, BaseEstimator):
    """Label each series by its nearest training series.

    Parameters
    ----------
    metric : {"dtw", "euclidean"}, default="dtw"
        ``"euclidean"`` is the L2 norm of the flattened difference.

    Notes
    -----
    Ties go to the lowest training index.
    """

    def __init__(self, metric="dtw"):
        self.metric = metric

    def fit(self, X, y):
        X = check_series_array(X)
        y = np.asarray(list(y), dtype=object)
        if len(y) != len(X):
            raise ValueError(f"{len(X)} series but {len(y)} labels")
        self.X_ = X
        self.y_ = y
        self.classes_ = np.asarray(_sort_labels(set(y)), dtype=object)
        return self

    def kneighbors(self, X):
        """Index of and distance to the nearest training series, per row of `X`."""
        check_is_fitted(self, "X_")
        X = check_series_array(X)
        if X.shape[2] != self.X_.shape[2]:
            raise ValueError("variable count differs from the training data")
        idx = np.empty(len(X), dtype=np.intp)
        dist = np.empty(len(X))
        for i, x in enumerate(X):
            d = distances_to(x, self.X_, self.metric)
            idx[i] = int(np.argmin(d))  # first minimum = lowest index
            dist[i] = d[idx[i]]
        return idx, dist

    def predict(self, X):
        idx, _ = self.kneighbors(X)
        return self.y_[idx]

    def score(self, X, y, sample_weight=None):
        pred = self.predict(X)
        y = np.asarray(list(y), dtype=object)
        return float(np.mean(pred == y))


@dataclass(frozen=True)
class Accuracy:
    overall: float
    per_class: dict


def eval_1nn(train, test, metric="dtw"):
    """1-NN accuracy of `test` against `train`, overall and per test class.

    Parameters
    ----------
    train, test : Dataset
    metric : {"dtw", "euclidean", "euclidean-flat"}

    Returns
    -------
    Accuracy
    """
    if tuple(train.shape) != tuple(test.shape):
        raise ValueError(f"train shape {tuple(train.shape)} != test shape {tuple(test.shape)}")
    clf = OneNearestNeighborClassifier(metric).fit(train.X, train.y)
    pred = clf.predict(test.X)
    truth = np.asarray(list(test.y), dtype=object)
    correct = pred == truth
    per_class = {
        label: float(np.mean(correct[test.class_indices(label)])) for label in test.classes
    }
    return Accuracy(float(np.mean(correct)), per_class)
