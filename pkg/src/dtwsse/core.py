"""Labeled time-series datasets and per-class oversampling quotas."""

import math
import zlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, NamedTuple

import numpy as np

from .exceptions import DatasetError, NonFiniteError, ShapeMismatchError
from .validation import check_series_array


class LabeledSample(NamedTuple):
    series: Any
    label: Any


def _sort_labels(labels):
    try:
        return sorted(labels)
    except TypeError:
        return sorted(labels, key=lambda v: (type(v).__name__, str(v)))


def _check_label(label, index):
    if label is None or (isinstance(label, str) and label == ""):
        raise DatasetError(f"sample {index} has an empty label")


@dataclass(frozen=True, eq=False)
class Dataset:
    """An immutable batch of equal-shape series with one label per series.

    Attributes
    ----------
    X : ndarray of shape (N, L, M), read-only
    y : ndarray of shape (N,), object dtype
    """

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = check_series_array(self.X)
        y = np.empty(len(self.y), dtype=object)
        y[:] = list(self.y)
        if len(y) != X.shape[0]:
            raise DatasetError(f"{X.shape[0]} series but {len(y)} labels")
        for i, label in enumerate(y):
            _check_label(label, i)
        X = X.copy()
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        index = {}
        for i, label in enumerate(y):
            index.setdefault(label, []).append(i)
        object.__setattr__(
            self,
            "_index",
            {label: np.asarray(ix, dtype=np.intp) for label, ix in index.items()},
        )

    @property
    def n_samples(self):
        return self.X.shape[0]

    @property
    def shape(self):
        """Common per-sample shape ``(L, M)``."""
        return self.X.shape[1:]

    @property
    def classes(self):
        """Class labels in sorted order."""
        return _sort_labels(self._index)

    @property
    def n_classes(self):
        return len(self._index)

    def class_indices(self, label):
        """Dataset positions of the samples of `label`, ascending."""
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"class {label!r} is not present in the dataset") from None

    def class_counts(self):
        return {label: len(self._index[label]) for label in self.classes}

    def __len__(self):
        return self.n_samples

    def __getitem__(self, i):
        return LabeledSample(self.X[i], self.y[i])

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.X.shape == other.X.shape
            and np.array_equal(self.X, other.X)
            and list(self.y) == list(other.y)
        )

    __hash__ = None


def validate_dataset(samples):
    """Build a :class:`Dataset` from a list of ``(series, label)`` pairs.

    Each series may be 1-D (univariate) or 2-D ``(L, M)``.

    Raises
    ------
    DatasetError
        On an empty list or an empty label.
    ShapeMismatchError
        Naming the first sample whose shape differs from sample 0.
    NonFiniteError
        If any value is NaN or infinite.
    """
    samples = list(samples)
    if not samples:
        raise DatasetError("cannot build a dataset from zero samples")
    arrays = []
    labels = []
    for i, (series, label) in enumerate(samples):
        arr = np.asarray(series, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2 or 0 in arr.shape:
            raise DatasetError(f"sample {i} is not a non-empty (L, M) series: {arr.shape}")
        if arrays and arr.shape != arrays[0].shape:
            raise ShapeMismatchError(i, arrays[0].shape, arr.shape)
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError(f"sample {i} contains non-finite values")
        _check_label(label, i)
        arrays.append(arr)
        labels.append(label)
    return Dataset(np.stack(arrays), labels)


@dataclass(frozen=True)
class ClassQuota:
    label: Any
    a: int
    onum: int
    cnum: int


def class_target(n_samples, expansion, n_classes):
    """Per-class target size ``floor(N * T / c)``, computed exactly."""
    t = expansion if isinstance(expansion, (int, Fraction)) else Fraction(str(expansion))
    return math.floor(Fraction(n_samples) * t / n_classes)


def plan_augmentation(dataset, config):
    """Number of synthetics and of centers for every class.

    ``onum = max(0, floor(N*T/c) - a)`` and ``cnum = ceil(onum / k)``.

    Returns
    -------
    list of ClassQuota
        One entry per class, in sorted label order.
    """
    target = class_target(dataset.n_samples, config.expansion, dataset.n_classes)
    quotas = []
    for label, a in dataset.class_counts().items():
        onum = max(0, target - a)
        quotas.append(ClassQuota(label, a, onum, -(-onum // config.k)))
    return quotas


def class_rng(seed, label):
    """Random generator for one class, derived from the run seed and the label.

    The label enters through ``str(label)``, so ``1`` and ``"1"`` share a stream.
    """
    if seed is None:
        return np.random.default_rng()
    tag = zlib.crc32(str(label).encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([int(seed), tag]))
