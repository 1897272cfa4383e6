"""
Regular, depthwise and separable 2-D convolutions.

Layout is (batch, channel, height, width); for EEG the height axis holds
electrodes and the width axis holds time. All convolutions are
cross-correlations with stride 1 and no bias. "same" padding puts the extra
zero on the trailing side when the total padding is odd.

Each op accumulates one kernel tap at a time, so peak memory stays at the
size of the output and the summation order is fixed.
"""

import logging
from typing import Literal

import numpy as np
from numerics import ShapeError, Tensor

from eegnet.layers.context import Gradients, LayerContext, layer_backward, register_backward

logger = logging.getLogger(__name__)

Padding = Literal["same", "valid"]


def _pad_amounts(kernel: int) -> tuple[int, int]:
    total = kernel - 1
    return total // 2, total - total // 2


def _pad(x: Tensor, kh: int, kw: int, padding: Padding) -> tuple[Tensor, tuple[int, int]]:
    if padding == "valid":
        return x, (0, 0)
    if padding != "same":
        msg = f"Padding must be 'same' or 'valid', got {padding!r}"
        logger.error(msg)
        raise ValueError(msg)
    top, bottom = _pad_amounts(kh)
    left, right = _pad_amounts(kw)
    return np.pad(x, ((0, 0), (0, 0), (top, bottom), (left, right))), (top, left)


def _output_size(op: str, padded: Tensor, kh: int, kw: int) -> tuple[int, int]:
    ho, wo = padded.shape[2] - kh + 1, padded.shape[3] - kw + 1
    if ho < 1 or wo < 1:
        msg = (
            f"{op} kernel {kh}x{kw} is larger than the padded input "
            f"{padded.shape[2]}x{padded.shape[3]}"
        )
        logger.error(msg)
        raise ShapeError(msg)
    return ho, wo


def _require_rank4(op: str, **tensors: Tensor) -> None:
    for name, tensor in tensors.items():
        if tensor.ndim != 4:
            msg = f"{op} expects a rank-4 {name}, got shape {tensor.shape}"
            logger.error(msg)
            raise ShapeError(msg)


def conv2d_forward(
    x: Tensor, kernel: Tensor, padding: Padding = "same"
) -> tuple[Tensor, LayerContext]:
    """
    Cross-correlate x [N, Cin, H, W] with kernel [Cout, Cin, kh, kw].

    Returns:
        y [N, Cout, H', W'] and the context for ``layer_backward``
    """
    _require_rank4("conv2d", x=x, kernel=kernel)
    cout, cin, kh, kw = kernel.shape
    if x.shape[1] != cin:
        msg = f"conv2d kernel expects {cin} input channels, got {x.shape[1]}"
        logger.error(msg)
        raise ShapeError(msg)

    padded, offsets = _pad(x, kh, kw, padding)
    ho, wo = _output_size("conv2d", padded, kh, kw)

    out = np.zeros((x.shape[0], ho, wo, cout), dtype=np.result_type(x, kernel))
    for i in range(kh):
        for j in range(kw):
            window = padded[:, :, i : i + ho, j : j + wo]
            out += np.tensordot(window, kernel[:, :, i, j], axes=([1], [1]))
    y = np.ascontiguousarray(out.transpose(0, 3, 1, 2))

    ctx = LayerContext(
        op="conv2d",
        output_shape=y.shape,
        saved={"padded": padded, "kernel": kernel, "offsets": offsets, "x_shape": x.shape},
    )
    return y, ctx


@register_backward("conv2d")
def _conv2d_backward(saved: dict, g: Tensor) -> Gradients:
    padded, kernel = saved["padded"], saved["kernel"]
    _, _, kh, kw = kernel.shape
    ho, wo = g.shape[2], g.shape[3]

    grad_padded = np.zeros_like(padded)
    grad_kernel = np.zeros_like(kernel)
    for i in range(kh):
        for j in range(kw):
            window = padded[:, :, i : i + ho, j : j + wo]
            grad_kernel[:, :, i, j] = np.tensordot(g, window, axes=([0, 2, 3], [0, 2, 3]))
            grad_padded[:, :, i : i + ho, j : j + wo] += np.tensordot(
                g, kernel[:, :, i, j], axes=([1], [0])
            ).transpose(0, 3, 1, 2)

    top, left = saved["offsets"]
    _, _, h, w = saved["x_shape"]
    return {
        "x": np.ascontiguousarray(grad_padded[:, :, top : top + h, left : left + w]),
        "kernel": grad_kernel,
    }


def depthwise_conv2d_forward(
    x: Tensor, kernel: Tensor, padding: Padding = "valid"
) -> tuple[Tensor, LayerContext]:
    """
    Convolve every input channel with its own D kernels.

    Args:
        x: [N, C, H, W]
        kernel: [C, D, kh, kw]
        padding: "valid" for the electrode collapse; the separable
            convolution's first stage uses "same"

    Returns:
        y [N, C*D, H', W'] where output channel c*D + d depends only on input
        channel c
    """
    _require_rank4("depthwise_conv2d", x=x, kernel=kernel)
    c, d, kh, kw = kernel.shape
    if x.shape[1] != c:
        msg = f"depthwise kernel covers {c} channels, input has {x.shape[1]}"
        logger.error(msg)
        raise ShapeError(msg)

    padded, offsets = _pad(x, kh, kw, padding)
    ho, wo = _output_size("depthwise_conv2d", padded, kh, kw)

    out = np.zeros((x.shape[0], c, d, ho, wo), dtype=np.result_type(x, kernel))
    for i in range(kh):
        for j in range(kw):
            window = padded[:, :, None, i : i + ho, j : j + wo]
            out += window * kernel[None, :, :, i, j, None, None]
    y = out.reshape(x.shape[0], c * d, ho, wo)

    ctx = LayerContext(
        op="depthwise_conv2d",
        output_shape=y.shape,
        saved={"padded": padded, "kernel": kernel, "offsets": offsets, "x_shape": x.shape},
    )
    return y, ctx


@register_backward("depthwise_conv2d")
def _depthwise_backward(saved: dict, g: Tensor) -> Gradients:
    padded, kernel = saved["padded"], saved["kernel"]
    c, d, kh, kw = kernel.shape
    n, _, ho, wo = g.shape
    g5 = g.reshape(n, c, d, ho, wo)

    grad_padded = np.zeros_like(padded)
    grad_kernel = np.zeros_like(kernel)
    for i in range(kh):
        for j in range(kw):
            window = padded[:, :, i : i + ho, j : j + wo]
            grad_kernel[:, :, i, j] = np.einsum("nchw,ncdhw->cd", window, g5)
            grad_padded[:, :, i : i + ho, j : j + wo] += np.einsum(
                "ncdhw,cd->nchw", g5, kernel[:, :, i, j]
            )

    top, left = saved["offsets"]
    _, _, h, w = saved["x_shape"]
    return {
        "x": np.ascontiguousarray(grad_padded[:, :, top : top + h, left : left + w]),
        "kernel": grad_kernel,
    }


def separable_conv2d_forward(
    x: Tensor, depth_kernel: Tensor, point_kernel: Tensor
) -> tuple[Tensor, LayerContext]:
    """
    Depthwise convolution over time (same padding) followed by a 1x1 conv.

    Args:
        x: [N, C, 1, W]
        depth_kernel: [C, 1, 1, kw]
        point_kernel: [Cout, C, 1, 1]

    Returns:
        y [N, Cout, 1, W], identical to composing the two stages
    """
    _require_rank4("separable_conv2d", depth_kernel=depth_kernel, point_kernel=point_kernel)
    if depth_kernel.shape[1] != 1 or depth_kernel.shape[2] != 1:
        msg = f"separable depth kernel must be [C, 1, 1, kw], got {depth_kernel.shape}"
        logger.error(msg)
        raise ShapeError(msg)
    if point_kernel.shape[2:] != (1, 1) or point_kernel.shape[1] != depth_kernel.shape[0]:
        msg = (
            f"separable stages disagree: depthwise stage has {depth_kernel.shape[0]} "
            f"channels, pointwise kernel is {point_kernel.shape}"
        )
        logger.error(msg)
        raise ShapeError(msg)

    hidden, depth_ctx = depthwise_conv2d_forward(x, depth_kernel, padding="same")
    y, point_ctx = conv2d_forward(hidden, point_kernel, padding="valid")

    ctx = LayerContext(
        op="separable_conv2d",
        output_shape=y.shape,
        saved={"depthwise": depth_ctx, "pointwise": point_ctx},
    )
    return y, ctx


@register_backward("separable_conv2d")
def _separable_backward(saved: dict, g: Tensor) -> Gradients:
    point = layer_backward(saved["pointwise"], g)
    depth = layer_backward(saved["depthwise"], point["x"])
    return {
        "x": depth["x"],
        "depth_kernel": depth["kernel"],
        "point_kernel": point["kernel"],
    }
