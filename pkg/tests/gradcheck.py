"""Central finite differences over a list of parameter arrays."""

import numpy as np


def numeric_grads(loss_fn, params, h=1e-5):
    grads = []
    for p in params:
        g = np.zeros_like(p)
        flat, gflat = p.reshape(-1), g.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            up = loss_fn()
            flat[i] = orig - h
            down = loss_fn()
            flat[i] = orig
            gflat[i] = (up - down) / (2 * h)
        grads.append(g)
    return grads


def relative_error(analytic, numeric):
    a = np.concatenate([g.ravel() for g in analytic])
    n = np.concatenate([g.ravel() for g in numeric])
    scale = max(np.linalg.norm(a), np.linalg.norm(n), 1e-12)
    return float(np.linalg.norm(a - n) / scale)


def randomize(net, rng, bias_scale=0.3):
    """Draw a fresh random parameter point in place."""
    for layer in net.layers:
        limit = np.sqrt(6.0 / (layer.fan_in + layer.fan_out))
        layer.weights[...] = rng.uniform(-limit, limit, layer.weights.shape)
        layer.biases[...] = rng.normal(0, bias_scale, layer.biases.shape)


def straddles_kink(net, X, h=1e-5):
    """Whether a +/-h step on one parameter can flip a ReLU of `net` on `X`.

    Only a ReLU first layer is supported; a step moves its preactivation by
    at most ``h * max(1, |x|)``.
    """
    if any(layer.activation == "relu" for layer in net.layers[1:]):
        raise NotImplementedError("ReLU past the first layer")
    first = net.layers[0]
    if first.activation != "relu":
        return False
    pre = X @ first.weights.T + first.biases
    return bool(np.min(np.abs(pre)) <= h * max(1.0, float(np.max(np.abs(X)))))
