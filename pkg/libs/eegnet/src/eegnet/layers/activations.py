import numpy as np
from numerics import Tensor

from eegnet.layers.context import Gradients, LayerContext, register_backward


def elu(x: Tensor) -> Tensor:
    """ELU with alpha 1: x for x > 0, exp(x) - 1 otherwise."""
    return np.where(x > 0, x, np.expm1(np.minimum(x, 0)))


def relu(x: Tensor) -> Tensor:
    return np.maximum(x, 0)


def elu_forward(x: Tensor) -> tuple[Tensor, LayerContext]:
    y = elu(x)
    return y, LayerContext(op="elu", output_shape=y.shape, saved={"x": x, "y": y})


@register_backward("elu")
def _elu_backward(saved: dict, g: Tensor) -> Gradients:
    x, y = saved["x"], saved["y"]
    return {"x": g * np.where(x > 0, 1, y + 1).astype(g.dtype, copy=False)}


def relu_forward(x: Tensor) -> tuple[Tensor, LayerContext]:
    y = relu(x)
    return y, LayerContext(op="relu", output_shape=y.shape, saved={"x": x})


@register_backward("relu")
def _relu_backward(saved: dict, g: Tensor) -> Gradients:
    return {"x": g * (saved["x"] > 0)}
