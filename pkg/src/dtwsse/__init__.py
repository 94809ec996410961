"""Time-series oversampling with DTW neighbors and a siamese autoencoder."""

from .augment import DTWSSE, augment, interpolate_latent
from .autoencoder import SiameseAutoencoder, TrainedAutoencoder, fit_autoencoder
from .config import AugmentConfig, AutoencoderConfig
from .core import ClassQuota, Dataset, LabeledSample, plan_augmentation, validate_dataset
from .dtw import brute_force_dtw, cost_matrix, dtw_distance, dtw_with_path, pairwise_dtw
from .evaluation import OneNearestNeighborClassifier, eval_1nn
from .io import load_model, read_ucr, save_model, write_ucr

__version__ = "0.1.0"

__all__ = [
    "DTWSSE",
    "AugmentConfig",
    "AutoencoderConfig",
    "ClassQuota",
    "Dataset",
    "LabeledSample",
    "OneNearestNeighborClassifier",
    "SiameseAutoencoder",
    "TrainedAutoencoder",
    "augment",
    "brute_force_dtw",
    "cost_matrix",
    "dtw_distance",
    "dtw_with_path",
    "eval_1nn",
    "fit_autoencoder",
    "interpolate_latent",
    "load_model",
    "pairwise_dtw",
    "plan_augmentation",
    "read_ucr",
    "save_model",
    "validate_dataset",
    "write_ucr",
]
