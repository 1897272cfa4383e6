"""
Forward and backward passes of the full classifier.

Layer stack:

    conv2d(F1, [1, temporal_kernel], same) -> BN
    -> depthwise([n_channels, 1], D, valid) -> BN -> ELU -> avgpool(pool1) -> dropout
    -> separable(sep_kernel, F2) -> BN -> ELU -> avgpool(pool2) -> dropout
    -> flatten -> dense(dense_units) -> ReLU -> dense(n_classes)

The softmax lives in the loss; ``forward`` returns logits.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from numerics import DEFAULT_DTYPE, Rng, ShapeError, Tensor

from eegnet.layers import (
    LayerContext,
    Mode,
    avgpool_forward,
    batchnorm_forward,
    conv2d_forward,
    dense_forward,
    depthwise_conv2d_forward,
    dropout_forward,
    elu_forward,
    flatten_forward,
    layer_backward,
    relu_forward,
    separable_conv2d_forward,
)
from eegnet.models.config import ArchConfig
from eegnet.models.params import ModelParams, buffer_shapes, trainable_shapes

logger = logging.getLogger(__name__)

MAXNORM_TOLERANCE = 1e-6

# weights laid out [C, D, kh, kw]: one kernel per (input channel, multiplier)
_DEPTHWISE_KERNELS = ("depthwise.kernel", "separable.depth_kernel")


@dataclass
class ForwardTrace:
    """Contexts of one forward pass, newest last, and the updated BN buffers."""

    steps: list[tuple[str, LayerContext]] = field(default_factory=list)
    buffers: dict[str, Tensor] = field(default_factory=dict)


def _glorot_limit(name: str, shape: tuple[int, ...]) -> float:
    if len(shape) == 2:
        fan_in, fan_out = shape
    else:
        receptive = shape[2] * shape[3]
        if name in _DEPTHWISE_KERNELS:
            fan_in, fan_out = shape[0] * receptive, shape[1] * receptive
        else:
            fan_in, fan_out = shape[1] * receptive, shape[0] * receptive
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


def build_model(arch: ArchConfig, rng: Rng) -> ModelParams:
    """
    Initialize every parameter of the stack.

    Kernels and dense weights are Glorot-uniform, drawn in definition order;
    gamma is 1, beta and biases 0, running mean 0 and running variance 1.
    Max-norm is not applied here; ``train_epoch`` projects after each step.
    """
    trainable: dict[str, Tensor] = {}
    for name, shape in trainable_shapes(arch).items():
        if name.endswith(".gamma"):
            trainable[name] = np.ones(shape, dtype=DEFAULT_DTYPE)
        elif name.endswith((".beta", ".b")):
            trainable[name] = np.zeros(shape, dtype=DEFAULT_DTYPE)
        else:
            limit = _glorot_limit(name, shape)
            trainable[name] = rng.uniform(shape, -limit, limit)

    buffers = {
        name: (np.zeros if name.endswith("mean") else np.ones)(shape, dtype=DEFAULT_DTYPE)
        for name, shape in buffer_shapes(arch).items()
    }
    params = ModelParams(arch=arch, trainable=trainable, buffers=buffers)
    logger.info(
        f"Built model with {params.trainable_count()} trainable parameters "
        f"({arch.n_channels} channels x {arch.n_samples} samples)"
    )
    return params


def _check_input(arch: ArchConfig, x: Tensor) -> Tensor:
    x = np.asarray(x)
    expected = (1, arch.n_channels, arch.n_samples)
    if x.ndim != 4 or x.shape[1:] != expected:
        msg = f"Model expects input of shape (N, {', '.join(map(str, expected))}), got {x.shape}"
        logger.error(msg)
        raise ShapeError(msg)
    return x.astype(DEFAULT_DTYPE, copy=False)


def forward(
    params: ModelParams,
    x: Tensor,
    mode: Mode = Mode.INFER,
    rng: Rng | None = None,
) -> tuple[Tensor, ForwardTrace]:
    """
    Run the stack on x [N, 1, n_channels, n_samples].

    Infer mode is a pure function of (params, x). Train mode uses batch
    statistics, returns the moved running statistics in the trace and
    consumes ``rng`` for dropout masks only.
    """
    arch = params.arch
    mode = Mode(mode)
    h = _check_input(arch, x)
    p = params.trainable
    trace = ForwardTrace(buffers=dict(params.buffers))

    def record(name: str, result: tuple[Tensor, LayerContext]) -> Tensor:
        y, ctx = result
        trace.steps.append((name, ctx))
        return y

    def normalize(name: str, h: Tensor) -> Tensor:
        mean_key, var_key = f"{name}.running_mean", f"{name}.running_var"
        y, ctx, (mean, var) = batchnorm_forward(
            h, p[f"{name}.gamma"], p[f"{name}.beta"],
            trace.buffers[mean_key], trace.buffers[var_key], mode=mode,
        )
        trace.buffers[mean_key], trace.buffers[var_key] = mean, var
        trace.steps.append((name, ctx))
        return y

    h = record("conv1", conv2d_forward(h, p["conv1.kernel"], padding="same"))
    h = normalize("bn1", h)
    h = record("depthwise", depthwise_conv2d_forward(h, p["depthwise.kernel"], padding="valid"))
    h = normalize("bn2", h)
    h = record("elu1", elu_forward(h))
    h = record("pool1", avgpool_forward(h, arch.pool1))
    h = record("dropout1", dropout_forward(h, arch.dropout_p, mode=mode, rng=rng))
    h = record(
        "separable",
        separable_conv2d_forward(h, p["separable.depth_kernel"], p["separable.point_kernel"]),
    )
    h = normalize("bn3", h)
    h = record("elu2", elu_forward(h))
    h = record("pool2", avgpool_forward(h, arch.pool2))
    h = record("dropout2", dropout_forward(h, arch.dropout_p, mode=mode, rng=rng))
    h = record("flatten", flatten_forward(h))
    if arch.dense_units:
        h = record("dense", dense_forward(h, p["dense.w"], p["dense.b"]))
        h = record("relu", relu_forward(h))
    logits = record("head", dense_forward(h, p["head.w"], p["head.b"]))
    return logits, trace


def backward(params: ModelParams, trace: ForwardTrace, grad_logits: Tensor) -> dict[str, Tensor]:
    """Gradients of every trainable tensor, keyed and ordered like ``params.trainable``."""
    grads: dict[str, Tensor] = {}
    g = grad_logits
    for name, ctx in reversed(trace.steps):
        result = layer_backward(ctx, g)
        g = result.pop("x")
        for key, value in result.items():
            grads[f"{name}.{key}"] = value
    return {name: grads[name] for name in params.trainable}


def labels_from_logits(logits: Tensor) -> np.ndarray:
    """Row-wise argmax; ties go to the lower class index."""
    return np.argmax(logits, axis=1).astype(np.int64)


def predict(params: ModelParams, x: Tensor) -> np.ndarray:
    """Class labels (0 = Low, 1 = High) for every trial in x."""
    logits, _ = forward(params, x, mode=Mode.INFER)
    return labels_from_logits(logits)


def predict_batches(params: ModelParams, x: Tensor, batch_size: int = 64) -> np.ndarray:
    """``predict`` in fixed-size chunks to bound peak memory on large sets."""
    if batch_size < 1:
        msg = f"Batch size must be at least 1, got {batch_size}"
        logger.error(msg)
        raise ValueError(msg)
    chunks = [predict(params, x[i : i + batch_size]) for i in range(0, len(x), batch_size)]
    return np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)


def _project(w: Tensor, limit: float, axis: tuple[int, ...]) -> Tensor:
    norms = np.sqrt(np.sum(np.square(w, dtype=np.float64), axis=axis, keepdims=True))
    over = norms > limit + MAXNORM_TOLERANCE
    if not over.any():
        return w
    scale = np.where(over, limit / np.where(over, norms, 1.0), 1.0)
    return (w * scale).astype(w.dtype)


def apply_maxnorm(params: ModelParams, arch: ArchConfig | None = None) -> ModelParams:
    """
    Project constrained weight groups onto their L2 balls.

    Each depthwise spatial kernel (one per input channel and multiplier) is
    limited to ``maxnorm_depthwise``; each column of the head weight matrix
    to ``maxnorm_dense``. Groups already inside their ball are untouched.
    """
    arch = arch or params.arch
    trainable = dict(params.trainable)
    if arch.maxnorm_depthwise is not None:
        trainable["depthwise.kernel"] = _project(
            trainable["depthwise.kernel"], arch.maxnorm_depthwise, axis=(2, 3)
        )
    if arch.maxnorm_dense is not None:
        trainable["head.w"] = _project(trainable["head.w"], arch.maxnorm_dense, axis=(0,))
    return params.replace(trainable=trainable)
