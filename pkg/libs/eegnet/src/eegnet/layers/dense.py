import logging

from numerics import ShapeError, Tensor, matmul

from eegnet.layers.context import Gradients, LayerContext, register_backward

logger = logging.getLogger(__name__)


def dense_forward(x: Tensor, w: Tensor, b: Tensor) -> tuple[Tensor, LayerContext]:
    """Affine map x [N, In] @ w [In, Out] + b [Out]."""
    if b.shape != (w.shape[-1],):
        msg = f"dense bias shape {b.shape} does not match weight shape {w.shape}"
        logger.error(msg)
        raise ShapeError(msg)
    y = matmul(x, w) + b
    return y, LayerContext(op="dense", output_shape=y.shape, saved={"x": x, "w": w})


@register_backward("dense")
def _dense_backward(saved: dict, g: Tensor) -> Gradients:
    x, w = saved["x"], saved["w"]
    return {"x": matmul(g, w.T), "w": matmul(x.T, g), "b": g.sum(axis=0)}
