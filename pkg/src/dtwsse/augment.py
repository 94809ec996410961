"""Oversampling pipelines that fill every class up to ``floor(N * T / c)``.

All four methods share quota planning, center selection and candidate
truncation; they differ in the neighbor metric and in where the
interpolation happens:

=========== ============== ==================================
method      neighbors      interpolation
=========== ============== ==================================
dtwsse      DTW            latent codes of a siamese autoencoder
smote       flat Euclidean raw values
smote-dtw   DTW            raw values
smote-ae    DTW            latent codes of a naive autoencoder
=========== ============== ==================================
"""

import dataclasses
import warnings
from typing import Any, NamedTuple

import numpy as np
from sklearn.base import BaseEstimator

from .autoencoder import SiameseAutoencoder, TrainedAutoencoder
from .config import METHODS, AugmentConfig
from .core import Dataset, class_rng, plan_augmentation
from .neighbors import (
    ClassDistanceCache,
    effective_k,
    k_nearest_within_class,
    select_centers,
)
from .validation import check_series_array

__all__ = [
    "Provenance",
    "SyntheticSample",
    "AugmentResult",
    "interpolate_latent",
    "augment",
    "dtwsse_augment",
    "smote_augment",
    "smote_dtw_augment",
    "smote_ae_augment",
    "DTWSSE",
]

_LAMBDA_DENOM = 2**53


class Provenance(NamedTuple):
    method: str
    center: int
    neighbor: int
    lam: float


class SyntheticSample(NamedTuple):
    series: np.ndarray
    label: Any
    provenance: Provenance


class AugmentResult(NamedTuple):
    dataset: Dataset
    synthetics: list


def interpolate_latent(h_q, h_e, lam):
    """Point ``h_q + lam * (h_e - h_q)`` on the segment between two codes."""
    h_q = np.asarray(h_q, dtype=np.float64)
    h_e = np.asarray(h_e, dtype=np.float64)
    if h_q.shape != h_e.shape:
        raise ValueError(f"code shapes differ: {h_q.shape} vs {h_e.shape}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lam must lie in [0, 1], got {lam}")
    return h_q + lam * (h_e - h_q)


def _draw_lambda(rng):
    # uniform on the closed interval [0, 1]
    return int(rng.integers(0, _LAMBDA_DENOM, endpoint=True)) / _LAMBDA_DENOM


def _plan_candidates(dataset, config, metric):
    """(label, [(center, neighbor, lam), ...]) per class needing synthetics."""
    plans = []
    for quota in plan_augmentation(dataset, config):
        if quota.onum == 0:
            continue
        if quota.a < 2:
            warnings.warn(
                f"class {quota.label!r} has a single sample; no neighbor exists, skipping",
                RuntimeWarning,
                stacklevel=3,
            )
            continue
        k = effective_k(quota.a, config.k, quota.label)
        if k != config.k:
            quota = dataclasses.replace(quota, cnum=-(-quota.onum // k))
        rng = class_rng(config.seed, quota.label)
        centers = select_centers(dataset, quota, rng)
        cache = ClassDistanceCache(dataset, quota.label, metric)
        triples = []
        for center in centers:
            for neighbor in k_nearest_within_class(dataset, center, k, metric, cache).neighbors:
                if len(triples) == quota.onum:
                    break
                triples.append((int(center), neighbor, _draw_lambda(rng)))
        plans.append((quota.label, triples))
    return plans


def _direct(dataset, triples):
    X = dataset.X
    q = np.array([t[0] for t in triples])
    e = np.array([t[1] for t in triples])
    lam = np.array([t[2] for t in triples])[:, None, None]
    return X[q] + lam * (X[e] - X[q])


def _latent(dataset, triples, ae):
    members = sorted({i for t in triples for i in t[:2]})
    codes = dict(zip(members, ae.encode(dataset.X[members])))
    H = np.stack([interpolate_latent(codes[q], codes[e], lam) for q, e, lam in triples])
    return ae.decode(H)


def _as_model(ae):
    if isinstance(ae, SiameseAutoencoder):
        return ae.model_
    return ae


def augment(dataset, config, ae=None):
    """Run the oversampling pipeline selected by ``config.method``.

    Parameters
    ----------
    dataset : Dataset
    config : AugmentConfig
    ae : TrainedAutoencoder, optional
        Required by ``"dtwsse"`` and ``"smote-ae"``.

    Returns
    -------
    AugmentResult
        Originals followed by synthetics (class by class in sorted label
        order, then candidate order), and the synthetic records.
    """
    method = config.method
    latent = method in ("dtwsse", "smote-ae")
    ae = _as_model(ae)
    if latent:
        if ae is None:
            raise ValueError(f"method {method!r} needs a trained autoencoder")
        if tuple(ae.shape) != tuple(dataset.shape):
            raise ValueError(
                f"autoencoder expects series of shape {tuple(ae.shape)}, "
                f"dataset has {tuple(dataset.shape)}"
            )
    metric = "euclidean-flat" if method == "smote" else "dtw"
    synthetics = []
    for label, triples in _plan_candidates(dataset, config, metric):
        series = _latent(dataset, triples, ae) if latent else _direct(dataset, triples)
        for s, (q, e, lam) in zip(series, triples):
            synthetics.append(SyntheticSample(s, label, Provenance(method, q, e, lam)))
    if not synthetics:
        return AugmentResult(dataset, [])
    X = np.concatenate([dataset.X, np.stack([s.series for s in synthetics])])
    y = list(dataset.y) + [s.label for s in synthetics]
    return AugmentResult(Dataset(X, y), synthetics)


def _with_method(config, method):
    return dataclasses.replace(config or AugmentConfig(), method=method)


def dtwsse_augment(dataset, config, ae):
    """DTW neighbors, interpolation between siamese-encoder codes."""
    return augment(dataset, _with_method(config, "dtwsse"), ae)


def smote_augment(dataset, config):
    """Classical SMOTE: flat Euclidean neighbors, interpolation on raw values."""
    return augment(dataset, _with_method(config, "smote"))


def smote_dtw_augment(dataset, config):
    """DTW neighbors, interpolation on raw values."""
    return augment(dataset, _with_method(config, "smote-dtw"))


def smote_ae_augment(dataset, config, naive_ae):
    """DTW neighbors, interpolation between codes of a naive autoencoder."""
    return augment(dataset, _with_method(config, "smote-ae"), naive_ae)


class DTWSSE(BaseEstimator):
    """Time-series oversampler with an imbalanced-learn style interface.

    Parameters
    ----------
    method : {"dtwsse", "smote", "smote-dtw", "smote-ae"}, default="dtwsse"
    expansion : float, default=10
        Target growth factor T; each class is filled to ``floor(N*T/c)``.
    k_neighbors : int, default=1
    autoencoder : SiameseAutoencoder or TrainedAutoencoder, optional
        Used by the latent methods. When omitted, one is fitted on the
        data passed to :meth:`fit_resample` (naive for ``"smote-ae"``).
    random_state : int, default=0

    Attributes
    ----------
    quotas_ : list of ClassQuota
    synthetic_ : list of SyntheticSample
    autoencoder_ : TrainedAutoencoder or None
    """

    def __init__(
        self,
        method="dtwsse",
        expansion=10,
        k_neighbors=1,
        autoencoder=None,
        random_state=0,
    ):
        self.method = method
        self.expansion = expansion
        self.k_neighbors = k_neighbors
        self.autoencoder = autoencoder
        self.random_state = random_state

    def fit_resample(self, X, y):
        """Return the original samples followed by the synthetic ones.

        `X` may be (N, L) or (N, L, M); the output keeps its dimensionality.
        """
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        two_d = np.ndim(X) == 2
        dataset = Dataset(check_series_array(X), list(y))
        config = AugmentConfig(
            expansion=self.expansion,
            k=self.k_neighbors,
            method=self.method,
            seed=self.random_state,
        )
        ae = None
        if self.method in ("dtwsse", "smote-ae"):
            ae = self.autoencoder
            if ae is None:
                ae = SiameseAutoencoder(
                    naive=self.method == "smote-ae", random_state=self.random_state
                )
            if isinstance(ae, SiameseAutoencoder) and not hasattr(ae, "model_"):
                ae = ae.fit(dataset.X)
            ae = _as_model(ae)
            if not isinstance(ae, TrainedAutoencoder):
                raise TypeError("autoencoder must be a SiameseAutoencoder or TrainedAutoencoder")
        self.quotas_ = plan_augmentation(dataset, config)
        result = augment(dataset, config, ae)
        self.synthetic_ = result.synthetics
        self.autoencoder_ = ae
        X_res = np.array(result.dataset.X)
        y_res = np.asarray(list(result.dataset.y))
        return (X_res[:, :, 0] if two_d else X_res), y_res
