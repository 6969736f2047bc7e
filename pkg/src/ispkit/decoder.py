"""Task-vector decoder: a small bias-free MLP producing parameter residuals.

A task vector ``t`` (default 3 dims) is mapped through 5 fully connected
layers (64 hidden channels, ReLU, linear output, no biases) to a 19-value
residual added to the default parameter set. Because there are no biases,
``decode(0, w)`` returns the defaults exactly for any weights.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, WeightsFormatError, WeightsValidationError
from .params import N_PARAMS, IspParams, default_params, normalize_ccm_rows

WEIGHTS_FORMAT_VERSION = 1

HIDDEN_WIDTH = 64
N_LAYERS = 5


def layer_dims(task_dim: int) -> list[int]:
    return [task_dim] + [HIDDEN_WIDTH] * (N_LAYERS - 1) + [N_PARAMS]


@dataclass(frozen=True)
class DecoderWeights:
    """Immutable stack of weight matrices, each shaped ``(out, in)``."""

    layers: tuple[np.ndarray, ...]

    @property
    def task_dim(self) -> int:
        return self.layers[0].shape[1]

    def validate(self) -> None:
        dims = layer_dims(self.task_dim)
        if len(self.layers) != N_LAYERS:
            raise WeightsValidationError(f"expected {N_LAYERS} layers, got {len(self.layers)}")
        for idx, (w, n_in, n_out) in enumerate(zip(self.layers, dims[:-1], dims[1:])):
            if w.shape != (n_out, n_in):
                raise WeightsValidationError(
                    f"layer {idx}: expected shape {(n_out, n_in)}, got {w.shape}"
                )
            if not np.all(np.isfinite(w)):
                raise WeightsValidationError(f"layer {idx} contains non-finite weights")


def count_params(w: DecoderWeights) -> int:
    """Total number of scalar weights."""
    return sum(layer.size for layer in w.layers)


def decode(t, w: DecoderWeights) -> IspParams:
    """Map a task vector to a full parameter set (residual on the defaults).

    The result always satisfies the CCM row-sum constraint.
    """
    t = np.asarray(t, dtype=float).reshape(-1)
    if t.shape[0] != w.task_dim:
        raise DimensionMismatchError(
            f"task vector has {t.shape[0]} dims, weights expect {w.task_dim}"
        )
    if not np.all(np.isfinite(t)):
        raise DimensionMismatchError("task vector contains non-finite values")
    w.validate()
    residual = _forward(t, w.layers)
    params = IspParams.from_vector(default_params().to_vector() + residual)
    return normalize_ccm_rows(params)


def _forward(t: np.ndarray, layers: Sequence[np.ndarray]) -> np.ndarray:
    h = t
    for weight in layers[:-1]:
        h = np.maximum(weight @ h, 0.0)
    return layers[-1] @ h


def save_weights(w: DecoderWeights) -> str:
    """Serialize to the JSON weights document (full round-trip precision)."""
    w.validate()
    doc = {
        "format_version": WEIGHTS_FORMAT_VERSION,
        "dims": layer_dims(w.task_dim),
        "activation": "relu",
        "layers": [layer.tolist() for layer in w.layers],
    }
    return json.dumps(doc)


def load_weights(text: str) -> DecoderWeights:
    """Parse and validate a JSON weights document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WeightsFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "layers" not in doc:
        raise WeightsFormatError("weights document must be an object with a 'layers' field")
    if doc.get("format_version") != WEIGHTS_FORMAT_VERSION:
        raise WeightsFormatError(f"unsupported format_version {doc.get('format_version')!r}")
    if doc.get("activation", "relu") != "relu":
        raise WeightsFormatError(f"unsupported activation {doc.get('activation')!r}")
    try:
        layers = tuple(np.asarray(layer, dtype=float) for layer in doc["layers"])
    except (TypeError, ValueError) as exc:
        raise WeightsFormatError(f"malformed layer data: {exc}") from exc
    w = DecoderWeights(layers=layers)
    w.validate()
    declared = doc.get("dims")
    if declared is not None and list(declared) != layer_dims(w.task_dim):
        raise WeightsValidationError(
            f"declared dims {declared} do not match layer shapes {layer_dims(w.task_dim)}"
        )
    return w


# Residual amplitudes used to calibrate synthetic weights: chosen so every
# strictly positive parameter keeps a margin above zero over t in [0, 10]^D.
_RESIDUAL_AMPLITUDE = np.concatenate((
    [0.6],            # dg (1.2 +- 0.6)
    [0.15, 0.5],      # wb_r, wb_b
    np.full(9, 0.25), # ccm entries (projected after decode)
    np.full(3, 0.08), # offsets
    [0.2],            # gamma (0.4545 +- 0.2)
    [1.2, 0.8, 1.0],  # tone s, p1, p2
))


def synth_weights(seed: int, scale: float, task_dim: int = 3) -> DecoderWeights:
    """Deterministic pseudo-random weights standing in for trained ones.

    Hidden layers are He-scaled Gaussian draws from ``default_rng(seed)``.
    The output layer is rescaled per parameter so that over a probe grid of
    task vectors in [0, 10]^D the residual amplitude equals
    ``scale * _RESIDUAL_AMPLITUDE``. ``scale=0`` gives all-zero weights.
    """
    if scale < 0:
        raise WeightsValidationError(f"scale must be >= 0, got {scale}")
    dims = layer_dims(task_dim)
    if scale == 0:
        return DecoderWeights(
            layers=tuple(np.zeros((n_out, n_in)) for n_in, n_out in zip(dims[:-1], dims[1:]))
        )
    rng = np.random.default_rng(seed)
    layers = [
        rng.standard_normal((n_out, n_in)) * np.sqrt(2.0 / n_in)
        for n_in, n_out in zip(dims[:-1], dims[1:])
    ]
    if 5**task_dim <= 1024:
        probe_axis = np.linspace(0.0, 10.0, 5)
        probes = np.stack(np.meshgrid(*[probe_axis] * task_dim, indexing="ij"), axis=-1)
        probes = probes.reshape(-1, task_dim)
    else:
        probes = rng.uniform(0.0, 10.0, size=(1024, task_dim))
    raw = np.stack([_forward(t, layers) for t in probes])
    amplitude = np.abs(raw).max(axis=0)
    row_scale = np.where(amplitude > 0, scale * _RESIDUAL_AMPLITUDE / np.maximum(amplitude, 1e-300), 0.0)
    layers[-1] = layers[-1] * row_scale[:, None]
    return DecoderWeights(layers=tuple(layers))
