"""
Batch normalization over the channel axis of a (N, C, H, W) tensor.
"""

import logging

import numpy as np
from numerics import ShapeError, Tensor

from eegnet.layers.context import Gradients, LayerContext, Mode, register_backward

logger = logging.getLogger(__name__)

BN_EPS = 1e-3
BN_MOMENTUM = 0.99

_AXES = (0, 2, 3)


def _per_channel(v: Tensor) -> Tensor:
    return v[None, :, None, None]


def batchnorm_forward(
    x: Tensor,
    gamma: Tensor,
    beta: Tensor,
    running_mean: Tensor,
    running_var: Tensor,
    mode: Mode = Mode.TRAIN,
    eps: float = BN_EPS,
    momentum: float = BN_MOMENTUM,
) -> tuple[Tensor, LayerContext, tuple[Tensor, Tensor]]:
    """
    Normalize each channel, then scale by gamma and shift by beta.

    Train mode uses the biased batch statistics over (N, H, W) and moves the
    running statistics towards them by ``1 - momentum``. Infer mode uses the
    running statistics and leaves them alone.

    Returns:
        y, the backward context and the (running_mean, running_var) to keep
    """
    c = x.shape[1]
    if any(v.shape != (c,) for v in (gamma, beta, running_mean, running_var)):
        msg = f"batchnorm parameters must all have shape ({c},)"
        logger.error(msg)
        raise ShapeError(msg)

    mode = Mode(mode)
    if mode is Mode.TRAIN:
        count = x.shape[0] * x.shape[2] * x.shape[3]
        if count < 2:
            msg = f"Train-mode batchnorm needs at least 2 values per channel, got {count}"
            logger.error(msg)
            raise ShapeError(msg)
        mean = x.mean(axis=_AXES)
        var = x.var(axis=_AXES)
        running_mean = momentum * running_mean + (1 - momentum) * mean
        running_var = momentum * running_var + (1 - momentum) * var
    else:
        mean, var = running_mean, running_var

    inv_std = 1.0 / np.sqrt(var + eps)
    x_hat = (x - _per_channel(mean)) * _per_channel(inv_std)
    y = x_hat * _per_channel(gamma) + _per_channel(beta)

    ctx = LayerContext(
        op="batchnorm",
        output_shape=y.shape,
        saved={"x_hat": x_hat, "inv_std": inv_std, "gamma": gamma, "mode": mode},
    )
    return y, ctx, (running_mean, running_var)


@register_backward("batchnorm")
def _batchnorm_backward(saved: dict, g: Tensor) -> Gradients:
    x_hat, inv_std, gamma = saved["x_hat"], saved["inv_std"], saved["gamma"]
    grad_gamma = (g * x_hat).sum(axis=_AXES)
    grad_beta = g.sum(axis=_AXES)
    g_hat = g * _per_channel(gamma)

    if saved["mode"] is Mode.INFER:
        grad_x = g_hat * _per_channel(inv_std)
    else:
        # batch statistics depend on x
        mean_g = g_hat.mean(axis=_AXES, keepdims=True)
        mean_gx = (g_hat * x_hat).mean(axis=_AXES, keepdims=True)
        grad_x = _per_channel(inv_std) * (g_hat - mean_g - x_hat * mean_gx)

    return {"x": grad_x, "gamma": grad_gamma, "beta": grad_beta}
