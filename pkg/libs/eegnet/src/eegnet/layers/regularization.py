import logging

import numpy as np
from numerics import Rng, Tensor

from eegnet.layers.context import Gradients, LayerContext, Mode, register_backward

logger = logging.getLogger(__name__)


def dropout_forward(
    x: Tensor, p: float, mode: Mode = Mode.TRAIN, rng: Rng | None = None
) -> tuple[Tensor, LayerContext]:
    """
    Inverted dropout: zero each element with probability ``p`` and scale the
    survivors by ``1 / (1 - p)``. Identity in infer mode or when p is 0.
    """
    if not 0.0 <= p < 1.0:
        msg = f"Dropout probability must be in [0, 1), got {p}"
        logger.error(msg)
        raise ValueError(msg)

    if Mode(mode) is Mode.INFER or p == 0.0:
        return x, LayerContext(op="dropout", output_shape=x.shape, saved={"mask": None})

    if rng is None:
        msg = "Train-mode dropout needs an Rng"
        logger.error(msg)
        raise ValueError(msg)
    keep = rng.random(x.shape) >= p
    mask = keep.astype(x.dtype) / x.dtype.type(1.0 - p)
    return x * mask, LayerContext(op="dropout", output_shape=x.shape, saved={"mask": mask})


@register_backward("dropout")
def _dropout_backward(saved: dict, g: Tensor) -> Gradients:
    mask = saved["mask"]
    return {"x": g if mask is None else g * mask}
