"""Synthetic labeled time-series datasets for examples and tests."""

import numpy as np

from .core import Dataset


def _warp_grid(length, rng, strength):
    u = np.linspace(0.0, 1.0, length)
    return u ** np.exp(rng.uniform(-strength, strength))


def make_warped_classes(n_per_class=10, length=24, noise=0.1, warp=0.5, seed=None):
    """Two classes of randomly time-warped template curves.

    Class ``"1"`` is a single bump, class ``"2"`` one period of a sine. Each
    sample applies a random monotone time warp ``u -> u**g`` with
    ``log g ~ Uniform(-warp, warp)`` and adds Gaussian noise.

    Returns
    -------
    Dataset
        Univariate, class-sorted, ``2 * n_per_class`` samples.
    """
    rng = np.random.default_rng(seed)
    X, y = [], []
    for label in ("1", "2"):
        for _ in range(n_per_class):
            w = _warp_grid(length, rng, warp)
            if label == "1":
                f = np.exp(-(((w - 0.5) / 0.12) ** 2))
            else:
                f = np.sin(2.0 * np.pi * w)
            X.append(f + noise * rng.standard_normal(length))
            y.append(label)
    return Dataset(np.asarray(X)[:, :, None], y)


def make_imbalanced_classes(class_sizes, length=8, n_vars=1, noise=0.3, seed=None):
    """Gaussian classes around distinct smooth prototypes.

    Parameters
    ----------
    class_sizes : sequence of int
        Sample count of each class; labels are ``"0"``, ``"1"``, ...

    Returns
    -------
    Dataset
    """
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, 1.0, length)[:, None]
    X, y = [], []
    for c, size in enumerate(class_sizes):
        proto = np.sin(2.0 * np.pi * (c + 1) * t / 2.0 + np.arange(n_vars))
        for _ in range(size):
            X.append(proto + noise * rng.standard_normal((length, n_vars)))
            y.append(str(c))
    return Dataset(np.asarray(X), y)
