"""Self-supervised autoencoder whose latent Euclidean distance tracks DTW.

Training runs in two phases on pairs of random sequences labeled with
their DTW value:

1. a single encoder network is applied to both members of every pair
   and trained so that the Euclidean distance between the two codes
   regresses the DTW label;
2. with the encoder frozen, a mirrored decoder is trained to reconstruct
   both members from their codes.

``train_naive`` is the ablation that fits encoder and decoder jointly on
reconstruction alone.
"""

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .config import AutoencoderConfig
from .dtw import dtw_paired
from .exceptions import TrainingDivergedError
from .neuralnet import AdamState, Mlp, adam_step, backward, forward, glorot_mlp
from .validation import check_series_array

__all__ = [
    "GeneratorParams",
    "PairSample",
    "PairSet",
    "TrainingHistory",
    "TrainedAutoencoder",
    "estimate_generator_params",
    "generate_pairs",
    "encoder_loss",
    "siamese_loss_and_grads",
    "reconstruction_loss_and_grads",
    "build_encoder",
    "build_decoder",
    "train_encoder",
    "train_decoder",
    "train_naive",
    "fit_autoencoder",
    "encode_pair",
    "decode",
    "SiameseAutoencoder",
]


# --------------------------------------------------------------------------
# Training pairs
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorParams:
    """Per-variable parameters of the stationary Gaussian AR(1) pair generator.

    Each variable is ``mean + std * z_t`` with ``z_t = rho * z_{t-1} +
    sqrt(1 - rho**2) * e_t``, so every element is marginally
    ``Normal(mean, std**2)``; ``rho = 0`` gives i.i.d. elements.
    """

    mean: np.ndarray
    std: np.ndarray
    rho: np.ndarray

    def __post_init__(self):
        for name in ("mean", "std", "rho"):
            object.__setattr__(self, name, np.atleast_1d(np.asarray(getattr(self, name), float)))
        if not (self.mean.shape == self.std.shape == self.rho.shape):
            raise ValueError("mean, std and rho need one entry per variable")
        if np.any(self.std < 0) or np.any(np.abs(self.rho) >= 1):
            raise ValueError("need std >= 0 and |rho| < 1")


def estimate_generator_params(X, temporal_correlation=None, max_rho=0.99):
    """Fit generator parameters to a training batch of shape (N, L, M).

    A variable with zero spread falls back to ``std = 1`` with a warning.
    """
    X = check_series_array(X)
    mean = X.mean(axis=(0, 1))
    std = X.std(axis=(0, 1))
    if np.any(std == 0):
        warnings.warn(
            "training data has a constant variable; generating pairs with std=1 for it",
            RuntimeWarning,
            stacklevel=2,
        )
        std = np.where(std == 0, 1.0, std)
    if temporal_correlation is not None:
        rho = np.full_like(mean, float(temporal_correlation))
    elif X.shape[1] < 2:
        rho = np.zeros_like(mean)
    else:
        Z = X - mean
        num = (Z[:, 1:] * Z[:, :-1]).sum(axis=(0, 1))
        den = (Z**2).sum(axis=(0, 1))
        rho = np.clip(num / den, -max_rho, max_rho)
    return GeneratorParams(mean, std, rho)


class PairSample(NamedTuple):
    s1: np.ndarray
    s2: np.ndarray
    y: float


@dataclass(frozen=True, eq=False)
class PairSet:
    """Pairs stored as stacked arrays: `s1`, `s2` of shape (P, L, M) and `y` (P,)."""

    s1: np.ndarray
    s2: np.ndarray
    y: np.ndarray

    def __len__(self):
        return len(self.y)

    def __getitem__(self, i):
        return PairSample(self.s1[i], self.s2[i], float(self.y[i]))

    @property
    def shape(self):
        return self.s1.shape[1:]

    def flat(self):
        """Pair members flattened to (P, L*M) rows in time-major order."""
        n = len(self)
        return self.s1.reshape(n, -1), self.s2.reshape(n, -1)


def _sample_sequences(shape, count, params, rng):
    L, M = shape
    e = rng.standard_normal((count, L, M))
    z = np.empty_like(e)
    z[:, 0] = e[:, 0]
    scale = np.sqrt(1.0 - params.rho**2)
    for t in range(1, L):
        z[:, t] = params.rho * z[:, t - 1] + scale * e[:, t]
    return params.mean + params.std * z


def generate_pairs(shape, count, params, rng):
    """Draw `count` random sequence pairs and label each with its DTW value.

    Parameters
    ----------
    shape : (int, int)
        Per-sequence shape ``(L, M)``.
    count : int
    params : GeneratorParams
    rng : numpy.random.Generator

    Returns
    -------
    PairSet
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    L, M = shape
    if params.mean.shape != (M,):
        raise ValueError(f"generator has {params.mean.size} variables, shape needs {M}")
    s1 = _sample_sequences(shape, count, params, rng)
    s2 = _sample_sequences(shape, count, params, rng)
    return PairSet(s1, s2, dtw_paired(s1, s2))


# --------------------------------------------------------------------------
# Losses
# --------------------------------------------------------------------------


def encoder_loss(h1, h2, y):
    """Squared error between the code distance and the DTW label.

    Accepts single vectors or batches; for a batch the mean is returned.
    """
    h1 = np.asarray(h1, dtype=np.float64)
    h2 = np.asarray(h2, dtype=np.float64)
    if h1.shape != h2.shape:
        raise ValueError(f"latent shapes differ: {h1.shape} vs {h2.shape}")
    d = np.linalg.norm(h1 - h2, axis=-1)
    return float(np.mean((d - np.asarray(y, dtype=np.float64)) ** 2))


def siamese_loss_and_grads(encoder, X1, X2, y):
    """Batch encoder loss and its gradient for the shared encoder.

    Both pair members pass through the same network in one stacked batch,
    so the gradients of the two branches accumulate into one parameter set.
    """
    b = len(y)
    H, tape = forward(encoder, np.concatenate([X1, X2]))
    diff = H[:b] - H[b:]
    d = np.linalg.norm(diff, axis=1)
    resid = d - y
    loss = float(np.mean(resid**2))
    # d(loss)/d(h1); undefined at d == 0, where the subgradient 0 is used
    coef = np.divide(2.0 * resid / b, d, out=np.zeros_like(d), where=d > 0)
    gh = coef[:, None] * diff
    grads, _ = backward(encoder, tape, np.concatenate([gh, -gh]))
    return loss, grads


def reconstruction_loss_and_grads(encoder, decoder, X1, X2, wrt="decoder", H1=None, H2=None):
    """Half the mean squared reconstruction error of each pair member, summed.

    Parameters
    ----------
    wrt : {"decoder", "both"}
        With ``"decoder"`` only decoder gradients are returned and the
        encoder is treated as a constant; precomputed codes `H1`, `H2` may
        then be passed to skip the encoder pass.

    Returns
    -------
    loss : float
    grads : list of ndarray
        Decoder gradients, or encoder gradients followed by decoder ones.
    """
    b = len(X1)
    S = np.concatenate([X1, X2])
    if wrt == "both":
        H, enc_tape = forward(encoder, S)
    elif wrt == "decoder":
        H = np.concatenate([H1, H2]) if H1 is not None else forward(encoder, S)[0]
    else:
        raise ValueError(f"wrt must be 'decoder' or 'both', got {wrt!r}")
    R, dec_tape = forward(decoder, H)
    err = R - S
    loss = float(0.5 * np.sum(err**2) / b)
    dec_grads, gH = backward(decoder, dec_tape, err / b)
    if wrt == "decoder":
        return loss, dec_grads
    enc_grads, _ = backward(encoder, enc_tape, gH)
    return loss, enc_grads + dec_grads


# --------------------------------------------------------------------------
# Training
# --------------------------------------------------------------------------


@dataclass
class TrainingHistory:
    """Loss record of one training phase.

    `losses` holds epoch-mean mini-batch losses; `initial_loss` and
    `final_loss` are full-set evaluations before and after training.
    """

    initial_loss: float
    final_loss: float = float("nan")
    losses: list = field(default_factory=list)
    converged: bool = False

    @property
    def epochs(self):
        return len(self.losses)


def build_encoder(shape, config, rng):
    d = shape[0] * shape[1]
    sizes = [d, config.hidden_mult * d, config.latent_mult * d]
    return glorot_mlp(sizes, ["relu", "linear"], rng)


def build_decoder(shape, config, rng):
    d = shape[0] * shape[1]
    sizes = [config.latent_mult * d, config.hidden_mult * d, d]
    return glorot_mlp(sizes, ["relu", "linear"], rng)


def _minimize(params, batch_loss, full_loss, n, config, rng):
    """Mini-batch Adam with the stall-based stopping rule.

    An epoch is stalled when its mean loss improves on the best epoch mean
    so far by less than ``config.tol`` relative; training stops after
    ``config.patience`` consecutive stalled epochs, at a zero loss, or at
    ``config.max_epochs``.
    """
    history = TrainingHistory(initial_loss=full_loss())
    if not np.isfinite(history.initial_loss):
        raise TrainingDivergedError(0, [])
    if history.initial_loss == 0.0:
        history.final_loss = 0.0
        history.converged = True
        return history
    state = AdamState.for_params(
        params,
        lr=config.learning_rate,
        beta1=config.beta1,
        beta2=config.beta2,
        epsilon=config.epsilon,
    )
    best = np.inf
    stalled = 0
    for epoch in range(1, config.max_epochs + 1):
        order = rng.permutation(n)
        total = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start:start + config.batch_size]
            loss, grads = batch_loss(idx)
            total += loss * len(idx)
            adam_step(params, grads, state)
        mean = total / n
        if not np.isfinite(mean):
            raise TrainingDivergedError(epoch - 1, history.losses)
        history.losses.append(mean)
        if mean == 0.0:
            history.converged = True
            break
        if np.isfinite(best) and (best - mean) / best < config.tol:
            stalled += 1
        else:
            stalled = 0
        best = min(best, mean)
        if stalled >= config.patience:
            history.converged = True
            break
    history.final_loss = full_loss()
    if not np.isfinite(history.final_loss):
        raise TrainingDivergedError(history.epochs - 1, history.losses)
    return history


def train_encoder(pairs, config=None, rng=None, encoder=None):
    """Fit the shared encoder so code distances regress the DTW labels.

    Parameters
    ----------
    pairs : PairSet
    config : AutoencoderConfig, optional
    rng : numpy.random.Generator, optional
        Used for initialisation (when `encoder` is None) and batch order.
    encoder : Mlp, optional
        Starting network; trained in place.

    Returns
    -------
    encoder : Mlp
    history : TrainingHistory
    """
    config = config or AutoencoderConfig()
    rng = rng if rng is not None else np.random.default_rng()
    if len(pairs) < 1:
        raise ValueError("need at least one training pair")
    if encoder is None:
        encoder = build_encoder(pairs.shape, config, rng)
    X1, X2 = pairs.flat()
    y = pairs.y

    def batch_loss(idx):
        return siamese_loss_and_grads(encoder, X1[idx], X2[idx], y[idx])

    def full_loss():
        return encoder_loss(encoder(X1), encoder(X2), y)

    history = _minimize(encoder.parameters(), batch_loss, full_loss, len(pairs), config, rng)
    return encoder, history


def train_decoder(encoder, pairs, config=None, rng=None, decoder=None):
    """Fit a decoder to invert a frozen encoder.

    The encoder is only evaluated, never updated.

    Returns
    -------
    decoder : Mlp
    history : TrainingHistory
    """
    config = config or AutoencoderConfig()
    rng = rng if rng is not None else np.random.default_rng()
    if decoder is None:
        decoder = build_decoder(pairs.shape, config, rng)
    if decoder.input_dim != encoder.output_dim or decoder.output_dim != encoder.input_dim:
        raise ValueError("decoder shape does not mirror the encoder")
    X1, X2 = pairs.flat()
    H1, H2 = encoder(X1), encoder(X2)

    def batch_loss(idx):
        return reconstruction_loss_and_grads(
            encoder, decoder, X1[idx], X2[idx], "decoder", H1[idx], H2[idx]
        )

    def full_loss():
        return reconstruction_loss_and_grads(encoder, decoder, X1, X2, "decoder", H1, H2)[0]

    history = _minimize(decoder.parameters(), batch_loss, full_loss, len(pairs), config, rng)
    return decoder, history


def train_naive(pairs, config=None, rng=None, encoder=None, decoder=None):
    """Fit encoder and decoder jointly on reconstruction error only.

    Returns
    -------
    TrainedAutoencoder
    """
    config = config or AutoencoderConfig()
    rng = rng if rng is not None else np.random.default_rng()
    if encoder is None:
        encoder = build_encoder(pairs.shape, config, rng)
    if decoder is None:
        decoder = build_decoder(pairs.shape, config, rng)
    X1, X2 = pairs.flat()

    def batch_loss(idx):
        return reconstruction_loss_and_grads(encoder, decoder, X1[idx], X2[idx], "both")

    def full_loss():
        return reconstruction_loss_and_grads(encoder, decoder, X1, X2, "both")[0]

    params = encoder.parameters() + decoder.parameters()
    history = _minimize(params, batch_loss, full_loss, len(pairs), config, rng)
    report = {
        "procedure": "naive",
        "n_pairs": len(pairs),
        "initial_decoder_loss": history.initial_loss,
        "final_decoder_loss": history.final_loss,
        "decoder_epochs": history.epochs,
        "decoder_loss_history": list(history.losses),
    }
    return TrainedAutoencoder(encoder, decoder, tuple(pairs.shape), report)


# --------------------------------------------------------------------------
# Trained model
# --------------------------------------------------------------------------


@dataclass(eq=False)
class TrainedAutoencoder:
    """Encoder and decoder networks for series of shape ``(L, M)``."""

    encoder: Mlp
    decoder: Mlp
    shape: tuple
    training_report: dict = field(default_factory=dict)

    def __post_init__(self):
        self.shape = tuple(int(s) for s in self.shape)
        d = self.shape[0] * self.shape[1]
        if self.encoder.input_dim != d or self.decoder.output_dim != d:
            raise ValueError(f"networks do not match series shape {self.shape}")
        if self.decoder.input_dim != self.encoder.output_dim:
            raise ValueError("decoder input width differs from encoder latent width")

    @property
    def latent_dim(self):
        return self.encoder.output_dim

    def encode(self, X):
        """Codes for a batch (N, L, M) or a single series (L, M)."""
        X = np.asarray(X, dtype=np.float64)
        single = X.shape == self.shape or (X.ndim == 1 and self.shape[1] == 1)
        batch = X.reshape(1 if single else len(X), -1)
        if batch.shape[1] != self.encoder.input_dim:
            raise ValueError(f"input shape {X.shape} does not match model shape {self.shape}")
        H = self.encoder(batch)
        return H[0] if single else H

    def decode(self, H):
        """Series of shape (L, M) for a code, or (N, L, M) for a batch of codes."""
        H = np.asarray(H, dtype=np.float64)
        if H.shape[-1] != self.latent_dim or H.ndim > 2:
            raise ValueError(
                f"latent input has shape {H.shape}, model expects length {self.latent_dim}"
            )
        out = self.decoder(H)
        return out.reshape(H.shape[:-1] + self.shape)


def encode_pair(ae, s1, s2):
    """Codes of two series through the one shared encoder."""
    for s in (s1, s2):
        if np.asarray(s).reshape(-1).size != ae.encoder.input_dim:
            raise ValueError(f"series of shape {np.shape(s)} does not match {ae.shape}")
    H = ae.encoder(np.stack([np.ravel(s1), np.ravel(s2)]).astype(np.float64))
    return H[0], H[1]


def decode(ae, h):
    """Decode one code vector into an (L, M) series."""
    h = np.asarray(h, dtype=np.float64)
    if h.shape != (ae.latent_dim,):
        raise ValueError(f"code has shape {h.shape}, expected ({ae.latent_dim},)")
    return ae.decode(h)


def fit_autoencoder(X, config=None, seed=None, naive=False, params=None):
    """Generate labeled pairs matched to `X` and train an autoencoder.

    Parameters
    ----------
    X : array-like of shape (N, L[, M]) or Dataset
    config : AutoencoderConfig, optional
    seed : int, optional
    naive : bool
        Train the reconstruction-only ablation instead.
    params : GeneratorParams, optional
        Overrides the parameters estimated from `X`.

    Returns
    -------
    TrainedAutoencoder
    """
    config = config or AutoencoderConfig()
    X = check_series_array(X.X if hasattr(X, "X") else X)
    shape = X.shape[1:]
    if params is None:
        params = estimate_generator_params(X, config.temporal_correlation)
    seq = np.random.SeedSequence(seed)
    pair_seq, enc_seq, dec_seq = seq.spawn(3)
    pairs = generate_pairs(shape, config.n_pairs, params, np.random.default_rng(pair_seq))
    if naive:
        ae = train_naive(pairs, config, np.random.default_rng(enc_seq))
    else:
        encoder, enc_hist = train_encoder(pairs, config, np.random.default_rng(enc_seq))
        decoder, dec_hist = train_decoder(encoder, pairs, config, np.random.default_rng(dec_seq))
        ae = TrainedAutoencoder(
            encoder,
            decoder,
            shape,
            {
                "procedure": "siamese",
                "n_pairs": len(pairs),
                "initial_encoder_loss": enc_hist.initial_loss,
                "final_encoder_loss": enc_hist.final_loss,
                "encoder_epochs": enc_hist.epochs,
                "encoder_loss_history": list(enc_hist.losses),
                "initial_decoder_loss": dec_hist.initial_loss,
                "final_decoder_loss": dec_hist.final_loss,
                "decoder_epochs": dec_hist.epochs,
                "decoder_loss_history": list(dec_hist.losses),
            },
        )
    ae.training_report["generator"] = {
        "mean": params.mean.tolist(),
        "std": params.std.tolist(),
        "rho": params.rho.tolist(),
    }
    return ae


# --------------------------------------------------------------------------
# Estimator wrapper
# --------------------------------------------------------------------------


class SiameseAutoencoder(TransformerMixin, BaseEstimator):
    """Scikit-learn transformer mapping series to DTW-matched latent codes.

    ``fit`` only uses `X` to estimate the pair generator's statistics; the
    networks are trained on generated pairs. ``transform`` returns codes
    and ``inverse_transform`` decodes them back to series.

    Parameters
    ----------
    n_pairs : int, default=2000
    latent_mult : int, default=10
    hidden_mult : int, default=4
    batch_size : int, default=32
    learning_rate : float, default=1e-3
    max_epochs : int, default=500
    tol : float, default=1e-3
    patience : int, default=5
    temporal_correlation : float or None, default=None
    naive : bool, default=False
        Train the reconstruction-only variant.
    random_state : int or None, default=None

    Attributes
    ----------
    model_ : TrainedAutoencoder
    n_features_in_ : int
        ``L * M`` of the fitted series.
    """

    def __init__(
        self,
        n_pairs=2000,
        latent_mult=10,
        hidden_mult=4,
        batch_size=32,
        learning_rate=1e-3,
        max_epochs=500,
        tol=1e-3,
        patience=5,
        temporal_correlation=None,
        naive=False,
        random_state=None,
    ):
        self.n_pairs = n_pairs
        self.latent_mult = latent_mult
        self.hidden_mult = hidden_mult
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.max_epochs = max_epochs
        self.tol = tol
        self.patience = patience
        self.temporal_correlation = temporal_correlation
        self.naive = naive
        self.random_state = random_state

    def _config(self):
        return AutoencoderConfig(
            n_pairs=self.n_pairs,
            latent_mult=self.latent_mult,
            hidden_mult=self.hidden_mult,
            batch_size=self.batch_size,
            learning_rate=self.learning_rate,
            max_epochs=self.max_epochs,
            tol=self.tol,
            patience=self.patience,
            temporal_correlation=self.temporal_correlation,
        )

    def fit(self, X, y=None):
        X = check_series_array(X)
        self.model_ = fit_autoencoder(X, self._config(), self.random_state, self.naive)
        self.n_features_in_ = X.shape[1] * X.shape[2]
        return self

    def transform(self, X):
        check_is_fitted(self, "model_")
        X = check_series_array(X)
        if X.shape[1:] != self.model_.shape:
            raise ValueError(f"X has series shape {X.shape[1:]}, fitted on {self.model_.shape}")
        return self.model_.encode(X)

    def inverse_transform(self, H):
        check_is_fitted(self, "model_")
        return self.model_.decode(np.atleast_2d(H))

    def __sklearn_is_fitted__(self):
        return hasattr(self, "model_")
