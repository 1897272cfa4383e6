import logging

import numpy as np
from numerics import ShapeError, Tensor

from eegnet.layers.context import Gradients, LayerContext, register_backward

logger = logging.getLogger(__name__)


def avgpool_forward(x: Tensor, pool_w: int) -> tuple[Tensor, LayerContext]:
    """
    Average non-overlapping windows of ``pool_w`` samples along the last axis.
    Trailing samples that do not fill a window are dropped.
    """
    if pool_w < 1:
        msg = f"Pool size must be at least 1, got {pool_w}"
        logger.error(msg)
        raise ValueError(msg)
    width = x.shape[-1]
    out_width = width // pool_w
    if out_width < 1:
        msg = f"Pool size {pool_w} exceeds input width {width}"
        logger.error(msg)
        raise ShapeError(msg)

    windows = x[..., : out_width * pool_w].reshape(*x.shape[:-1], out_width, pool_w)
    y = windows.mean(axis=-1)
    ctx = LayerContext(
        op="avgpool",
        output_shape=y.shape,
        saved={"pool_w": pool_w, "width": width, "dtype": x.dtype},
    )
    return y, ctx


@register_backward("avgpool")
def _avgpool_backward(saved: dict, g: Tensor) -> Gradients:
    pool_w, width = saved["pool_w"], saved["width"]
    grad_x = np.zeros((*g.shape[:-1], width), dtype=np.result_type(g, saved["dtype"]))
    spread = np.repeat(g / pool_w, pool_w, axis=-1)
    grad_x[..., : spread.shape[-1]] = spread
    return {"x": grad_x}


def flatten_forward(x: Tensor) -> tuple[Tensor, LayerContext]:
    """Flatten everything after the batch axis in row-major order."""
    y = x.reshape(x.shape[0], -1)
    return y, LayerContext(op="flatten", output_shape=y.shape, saved={"x_shape": x.shape})


@register_backward("flatten")
def _flatten_backward(saved: dict, g: Tensor) -> Gradients:
    return {"x": g.reshape(saved["x_shape"])}
