"""UCR-style delimited dataset files and JSON model files.

A dataset row is ``label<d>v_1<d>...<d>v_{L*M}`` with values in time-major
order (all variables of t=1, then t=2, ...); ``<d>`` is a tab or a comma.
"""

import json
import math
from pathlib import Path

import numpy as np

from .autoencoder import TrainedAutoencoder
from .core import Dataset
from .exceptions import ModelFormatError, NonFiniteError, ParseError
from .neuralnet import DenseLayer, Mlp

FORMAT_VERSION = 1

__all__ = ["read_ucr", "write_ucr", "save_model", "load_model", "FORMAT_VERSION"]


def _detect_delimiter(line):
    if "\t" in line:
        return "\t"
    if "," in line:
        return ","
    raise ParseError(1, "cannot detect delimiter (expected tab or comma)")


def read_ucr(path, n_vars=1, delimiter=None):
    """Read a delimited dataset file.

    Parameters
    ----------
    path : str or Path
    n_vars : int
        Number of variables M; ``(fields - 1)`` must be divisible by it.
    delimiter : {"\\t", ","}, optional
        Detected from the first non-blank line when omitted.

    Returns
    -------
    Dataset
        Labels are kept verbatim as strings.
    """
    if n_vars < 1:
        raise ValueError(f"n_vars must be >= 1, got {n_vars}")
    text = Path(path).read_text(encoding="utf-8")
    rows = [(n, line.rstrip("\r")) for n, line in enumerate(text.split("\n"), 1)]
    rows = [(n, line) for n, line in rows if line.strip()]
    if not rows:
        raise ParseError(1, "file contains no rows")
    if delimiter is None:
        delimiter = _detect_delimiter(rows[0][1])
    n_fields = None
    labels, values = [], []
    for lineno, line in rows:
        fields = [f.strip() for f in line.split(delimiter)]
        if n_fields is None:
            n_fields = len(fields)
            if n_fields < 2:
                raise ParseError(lineno, "a row needs a label and at least one value")
            if (n_fields - 1) % n_vars:
                raise ParseError(
                    lineno, f"{n_fields - 1} values are not divisible into {n_vars} variables"
                )
        elif len(fields) != n_fields:
            raise ParseError(lineno, f"expected {n_fields} fields, found {len(fields)}")
        if not fields[0]:
            raise ParseError(lineno, "empty label")
        try:
            row = [float(f) for f in fields[1:]]
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
        if not all(math.isfinite(v) for v in row):
            raise NonFiniteError(f"line {lineno}: non-finite value")
        labels.append(fields[0])
        values.append(row)
    L = (n_fields - 1) // n_vars
    return Dataset(np.asarray(values).reshape(len(values), L, n_vars), labels)


def write_ucr(dataset, path, delimiter="\t"):
    """Write `dataset` so that :func:`read_ucr` reproduces it exactly.

    Values use Python's shortest round-trip float repr.
    """
    if delimiter not in ("\t", ","):
        raise ValueError("delimiter must be a tab or a comma")
    lines = []
    for series, label in zip(dataset.X, dataset.y):
        label = str(label)
        if delimiter in label or "\n" in label:
            raise ValueError(f"label {label!r} contains the delimiter or a newline")
        lines.append(delimiter.join([label] + [repr(float(v)) for v in series.ravel()]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _layer_record(layer):
    return {
        "fan_in": layer.fan_in,
        "fan_out": layer.fan_out,
        "activation": layer.activation,
        "weights": layer.weights.ravel().tolist(),
        "biases": layer.biases.tolist(),
    }


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, np.generic):
        return _json_safe(value.item())
    return value


def save_model(ae, path):
    """Serialise a trained autoencoder to JSON; floats round-trip exactly."""
    L, M = ae.shape
    doc = {
        "format_version": FORMAT_VERSION,
        "shape": {"L": L, "M": M},
        "latent_dim": ae.latent_dim,
        "encoder": [_layer_record(l) for l in ae.encoder.layers],
        "decoder": [_layer_record(l) for l in ae.decoder.layers],
        "training_report": _json_safe(ae.training_report),
    }
    Path(path).write_text(json.dumps(doc, allow_nan=False), encoding="utf-8")


def _parse_layers(records, where):
    if not isinstance(records, list) or not records:
        raise ModelFormatError(f"{where} must be a non-empty list of layers")
    layers = []
    for i, rec in enumerate(records):
        try:
            fan_in, fan_out = int(rec["fan_in"]), int(rec["fan_out"])
            w = np.asarray(rec["weights"], dtype=np.float64)
            b = np.asarray(rec["biases"], dtype=np.float64)
            act = rec["activation"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelFormatError(f"{where} layer {i}: {exc!r}") from None
        if w.shape != (fan_in * fan_out,) or b.shape != (fan_out,):
            raise ModelFormatError(f"{where} layer {i}: parameter sizes do not match fans")
        try:
            layers.append(DenseLayer(w.reshape(fan_out, fan_in), b, act))
        except ValueError as exc:
            raise ModelFormatError(f"{where} layer {i}: {exc}") from None
    try:
        return Mlp(layers)
    except ValueError as exc:
        raise ModelFormatError(f"{where}: {exc}") from None


def load_model(path):
    """Read a model written by :func:`save_model`.

    Raises
    ------
    ModelFormatError
        On malformed JSON, a schema violation or an unknown format version.
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"not a valid model file: {exc}") from None
    if not isinstance(doc, dict):
        raise ModelFormatError("model file must contain a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported format_version {version!r}")
    try:
        shape = (int(doc["shape"]["L"]), int(doc["shape"]["M"]))
        latent_dim = int(doc["latent_dim"])
        encoder = _parse_layers(doc["encoder"], "encoder")
        decoder = _parse_layers(doc["decoder"], "decoder")
    except (KeyError, TypeError) as exc:
        raise ModelFormatError(f"missing or malformed field: {exc!r}") from None
    if encoder.output_dim != latent_dim:
        raise ModelFormatError("encoder output width differs from latent_dim")
    try:
        return TrainedAutoencoder(encoder, decoder, shape, doc.get("training_report") or {})
    except ValueError as exc:
        raise ModelFormatError(str(exc)) from None
