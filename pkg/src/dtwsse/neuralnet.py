"""A small dense network kernel: forward pass, backpropagation and Adam.

Everything is float64. Layers compute ``act(x @ W.T + b)`` with ``W`` stored
as (fan_out, fan_in).
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DenseLayer",
    "Mlp",
    "AdamState",
    "forward",
    "backward",
    "adam_step",
    "glorot_mlp",
]

ACTIVATIONS = ("relu", "linear")


@dataclass
class DenseLayer:
    weights: np.ndarray
    biases: np.ndarray
    activation: str = "linear"

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.biases = np.asarray(self.biases, dtype=np.float64)
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.weights.ndim != 2 or self.biases.shape != (self.weights.shape[0],):
            raise ValueError(
                f"inconsistent layer: weights {self.weights.shape}, "
                f"biases {self.biases.shape}"
            )

    @property
    def fan_in(self):
        return self.weights.shape[1]

    @property
    def fan_out(self):
        return self.weights.shape[0]


@dataclass
class Mlp:
    layers: list

    def __post_init__(self):
        if not self.layers:
            raise ValueError("an Mlp needs at least one layer")
        for k, (prev, nxt) in enumerate(zip(self.layers, self.layers[1:])):
            if prev.fan_out != nxt.fan_in:
                raise ValueError(
                    f"layer {k} outputs {prev.fan_out} values but layer {k + 1} "
                    f"expects {nxt.fan_in}"
                )

    @property
    def input_dim(self):
        return self.layers[0].fan_in

    @property
    def output_dim(self):
        return self.layers[-1].fan_out

    def parameters(self):
        """Parameter arrays in a fixed order: W0, b0, W1, b1, ..."""
        out = []
        for layer in self.layers:
            out.extend((layer.weights, layer.biases))
        return out

    def copy(self):
        return Mlp(
            [DenseLayer(l.weights.copy(), l.biases.copy(), l.activation) for l in self.layers]
        )

    def __call__(self, x):
        return forward(self, x)[0]


def glorot_mlp(sizes, activations, rng):
    """Build an Mlp with Glorot-uniform weights and zero biases.

    Parameters
    ----------
    sizes : sequence of int
        Layer widths including the input, e.g. ``[24, 96, 240]``.
    activations : sequence of str
        One activation per layer (``len(sizes) - 1`` entries).
    rng : numpy.random.Generator
    """
    if len(activations) != len(sizes) - 1:
        raise ValueError("need one activation per layer")
    layers = []
    for fan_in, fan_out, act in zip(sizes[:-1], sizes[1:], activations):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        w = rng.uniform(-limit, limit, size=(fan_out, fan_in))
        layers.append(DenseLayer(w, np.zeros(fan_out), act))
    return Mlp(layers)


def forward(net, x):
    """Evaluate `net` on a vector (D,) or a batch (B, D).

    Returns
    -------
    output : ndarray
    tape : list of (input, pre_activation) per layer, for :func:`backward`.
    """
    x = np.asarray(x, dtype=np.float64)
    squeeze = x.ndim == 1
    h = x[None, :] if squeeze else x
    if h.ndim != 2 or h.shape[1] != net.input_dim:
        raise ValueError(
            f"input has shape {x.shape}, network expects {net.input_dim} features"
        )
    tape = []
    for layer in net.layers:
        z = h @ layer.weights.T + layer.biases
        tape.append((h, z))
        h = np.maximum(z, 0.0) if layer.activation == "relu" else z
    return (h[0] if squeeze else h), tape


def backward(net, tape, grad_output):
    """Backpropagate `grad_output` (d loss / d output) through `net`.

    Batch rows are summed into the parameter gradients, so the caller
    folds any 1/B normalisation into `grad_output`.

    Returns
    -------
    param_grads : list of ndarray
        Aligned with :meth:`Mlp.parameters`.
    grad_input : ndarray
        Same shape as the forward input.
    """
    g = np.asarray(grad_output, dtype=np.float64)
    squeeze = g.ndim == 1
    if squeeze:
        g = g[None, :]
    if len(tape) != len(net.layers) or g.shape != tape[-1][1].shape:
        raise ValueError(
            f"output gradient shape {g.shape} does not match the recorded forward pass"
        )
    grads = [None] * (2 * len(net.layers))
    for k in range(len(net.layers) - 1, -1, -1):
        layer = net.layers[k]
        h_in, z = tape[k]
        if layer.activation == "relu":
            g = g * (z > 0)
        grads[2 * k] = g.T @ h_in
        grads[2 * k + 1] = g.sum(axis=0)
        g = g @ layer.weights
    return grads, (g[0] if squeeze else g)


@dataclass
class AdamState:
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    t: int = 0
    m: list = field(default_factory=list)
    v: list = field(default_factory=list)

    @classmethod
    def for_params(cls, params, **hyper):
        state = cls(**hyper)
        state.m = [np.zeros_like(p) for p in params]
        state.v = [np.zeros_like(p) for p in params]
        return state


def adam_step(params, grads, state):
    """One bias-corrected Adam update, applied to `params` in place.

    Returns
    -------
    (params, state) : the same objects, mutated.
    """
    if len(params) != len(grads) or len(params) != len(state.m):
        raise ValueError("params, grads and optimizer moments must align")
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1**state.t
    c2 = 1.0 - b2**state.t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if p.shape != g.shape:
            raise ValueError(f"gradient shape {g.shape} != parameter shape {p.shape}")
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        p -= state.lr * (m / c1) / (np.sqrt(v / c2) + state.epsilon)
    return params, state
