"""Configuration records for autoencoder training and augmentation."""

from dataclasses import dataclass, field

from .validation import check_positive_int, check_positive_real, check_seed

METHODS = ("dtwsse", "smote", "smote-dtw", "smote-ae")


@dataclass(frozen=True)
class AutoencoderConfig:
    """Hyperparameters of the encoder/decoder networks and their training.

    Parameters
    ----------
    n_pairs : int
        Number of random sequence pairs generated for training.
    latent_mult : int
        Latent width is ``latent_mult * L * M``.
    hidden_mult : int
        Hidden width is ``hidden_mult * L * M``.
    batch_size, learning_rate, beta1, beta2, epsilon
        Mini-batch Adam settings.
    max_epochs : int
    tol : float
        Relative improvement of the epoch-mean loss below which an epoch
        counts as stalled.
    patience : int
        Consecutive stalled epochs that end training.
    temporal_correlation : float or None
        Lag-1 autocorrelation of generated sequences. ``None`` estimates it
        from the training data; ``0.0`` gives i.i.d. Gaussian elements.
    """

    n_pairs: int = 2000
    latent_mult: int = 10
    hidden_mult: int = 4
    batch_size: int = 32
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    max_epochs: int = 500
    tol: float = 1e-3
    patience: int = 5
    temporal_correlation: float = None

    def __post_init__(self):
        check_positive_int(self.n_pairs, "n_pairs")
        check_positive_int(self.latent_mult, "latent_mult")
        check_positive_int(self.hidden_mult, "hidden_mult")
        check_positive_int(self.batch_size, "batch_size")
        check_positive_real(self.learning_rate, "learning_rate")
        check_positive_int(self.max_epochs, "max_epochs")
        check_positive_int(self.patience, "patience")
        if not 0 <= self.tol < 1:
            raise ValueError(f"tol must lie in [0, 1), got {self.tol}")
        rho = self.temporal_correlation
        if rho is not None and not -1 < rho < 1:
            raise ValueError(f"temporal_correlation must lie in (-1, 1), got {rho}")


@dataclass(frozen=True)
class AugmentConfig:
    """Settings of one oversampling run.

    Parameters
    ----------
    expansion : float
        Multiplier T; each class is filled up to ``floor(N * T / c)``.
    k : int
        Neighbors per center.
    method : {"dtwsse", "smote", "smote-dtw", "smote-ae"}
    seed : int
        Unsigned 64-bit seed; determines every random draw.
    autoencoder : AutoencoderConfig
    """

    expansion: float = 10
    k: int = 1
    method: str = "dtwsse"
    seed: int = 0
    autoencoder: AutoencoderConfig = field(default_factory=AutoencoderConfig)

    def __post_init__(self):
        check_positive_real(self.expansion, "expansion")
        check_positive_int(self.k, "k")
        check_seed(self.seed)
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
