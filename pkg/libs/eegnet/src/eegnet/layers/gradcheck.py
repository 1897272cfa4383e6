"""
Finite-difference verification of the backward rules.

Every case runs in double precision. The analytic gradient of the scalar
``sum(cotangent * y)`` is compared coordinate by coordinate with a central
difference of step ``1e-3 * max(1, |theta|)``.
"""

import logging
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np
from numerics import Rng, Tensor
from pydantic import BaseModel

from eegnet.layers.activations import elu_forward, relu_forward
from eegnet.layers.context import Gradients, Mode, NonFiniteError, layer_backward
from eegnet.layers.convolution import (
    conv2d_forward,
    depthwise_conv2d_forward,
    separable_conv2d_forward,
)
from eegnet.layers.dense import dense_forward
from eegnet.layers.losses import softmax_xent
from eegnet.layers.normalization import batchnorm_forward
from eegnet.layers.pooling import avgpool_forward
from eegnet.layers.regularization import dropout_forward

logger = logging.getLogger(__name__)

GRADCHECK_TOLERANCE = 1e-4
STEP_SCALE = 1e-3
KINK_MARGIN = 0.1

Pullback = Callable[[Tensor], Gradients]
CaseForward = Callable[[dict[str, Tensor], int], tuple[Tensor, Pullback]]


@dataclass(frozen=True)
class GradcheckCase:
    """A forward op wrapped so every differentiable input is named."""

    name: str
    shapes: dict[str, tuple[int, ...]]
    forward: CaseForward
    away_from_zero: tuple[str, ...] = field(default=())


class GradcheckResult(BaseModel):
    layer: str
    max_rel_error: float
    tolerance: float = GRADCHECK_TOLERANCE

    @property
    def passed(self) -> bool:
        return self.max_rel_error < self.tolerance


def _single(forward: Callable[..., tuple], *names: str, **kwargs) -> CaseForward:
    def run(t: dict[str, Tensor], seed: int) -> tuple[Tensor, Pullback]:
        y, ctx = forward(*(t[name] for name in names), **kwargs)
        return y, lambda g: layer_backward(ctx, g)

    return run


def _batchnorm(t: dict[str, Tensor], seed: int) -> tuple[Tensor, Pullback]:
    c = t["gamma"].shape[0]
    y, ctx, _ = batchnorm_forward(
        t["x"], t["gamma"], t["beta"], np.zeros(c), np.ones(c), mode=Mode.TRAIN
    )
    return y, lambda g: layer_backward(ctx, g)


def _dropout(t: dict[str, Tensor], seed: int) -> tuple[Tensor, Pullback]:
    # a fresh stream per evaluation keeps the mask fixed
    y, ctx = dropout_forward(t["x"], 0.5, mode=Mode.TRAIN, rng=Rng(seed))
    return y, lambda g: layer_backward(ctx, g)


_XENT_LABELS = np.array([0, 2, 1, 2])


def _softmax_xent(t: dict[str, Tensor], seed: int) -> tuple[Tensor, Pullback]:
    loss, grad, _ = softmax_xent(t["logits"], _XENT_LABELS[: t["logits"].shape[0]])
    return np.array([loss]), lambda g: {"logits": grad * g[0]}


def _block(t: dict[str, Tensor], seed: int) -> tuple[Tensor, Pullback]:
    c = t["gamma"].shape[0]
    h, conv_ctx = conv2d_forward(t["x"], t["kernel"], padding="same")
    h, bn_ctx, _ = batchnorm_forward(
        h, t["gamma"], t["beta"], np.zeros(c), np.ones(c), mode=Mode.TRAIN
    )
    h, elu_ctx = elu_forward(h)
    y, pool_ctx = avgpool_forward(h, 2)

    def pullback(g: Tensor) -> Gradients:
        g = layer_backward(pool_ctx, g)["x"]
        g = layer_backward(elu_ctx, g)["x"]
        bn = layer_backward(bn_ctx, g)
        conv = layer_backward(conv_ctx, bn["x"])
        return {
            "x": conv["x"],
            "kernel": conv["kernel"],
            "gamma": bn["gamma"],
            "beta": bn["beta"],
        }

    return y, pullback


GRADCHECK_CASES: dict[str, GradcheckCase] = {
    case.name: case
    for case in (
        GradcheckCase(
            "conv2d",
            {"x": (2, 2, 3, 5), "kernel": (3, 2, 2, 3)},
            _single(conv2d_forward, "x", "kernel", padding="same"),
        ),
        GradcheckCase(
            "conv2d_valid",
            {"x": (2, 1, 3, 6), "kernel": (2, 1, 2, 4)},
            _single(conv2d_forward, "x", "kernel", padding="valid"),
        ),
        GradcheckCase(
            "depthwise",
            {"x": (2, 2, 3, 4), "kernel": (2, 2, 3, 1)},
            _single(depthwise_conv2d_forward, "x", "kernel", padding="valid"),
        ),
        GradcheckCase(
            "separable",
            {"x": (2, 3, 1, 7), "depth_kernel": (3, 1, 1, 4), "point_kernel": (4, 3, 1, 1)},
            _single(separable_conv2d_forward, "x", "depth_kernel", "point_kernel"),
        ),
        GradcheckCase("batchnorm", {"x": (4, 2, 2, 3), "gamma": (2,), "beta": (2,)}, _batchnorm),
        GradcheckCase("avgpool", {"x": (2, 2, 1, 9)}, _single(avgpool_forward, "x", pool_w=4)),
        GradcheckCase("dropout", {"x": (2, 3, 1, 8)}, _dropout),
        GradcheckCase("dense", {"x": (3, 4), "w": (4, 5), "b": (5,)}, _single(dense_forward, "x", "w", "b")),
        GradcheckCase("elu", {"x": (3, 7)}, _single(elu_forward, "x"), away_from_zero=("x",)),
        GradcheckCase("relu", {"x": (3, 7)}, _single(relu_forward, "x"), away_from_zero=("x",)),
        GradcheckCase("softmax_xent", {"logits": (4, 3)}, _softmax_xent),
        GradcheckCase(
            "block",
            {"x": (2, 1, 3, 8), "kernel": (2, 1, 1, 3), "gamma": (2,), "beta": (2,)},
            _block,
        ),
    )
}


def _push_from_zero(t: Tensor) -> Tensor:
    return np.where(t >= 0, t + KINK_MARGIN, t - KINK_MARGIN)


def _objective(case: GradcheckCase, tensors: dict[str, Tensor], seed: int, cot: Tensor) -> float:
    y, _ = case.forward(tensors, seed)
    return float(np.sum(y * cot))


def gradcheck(
    layer: str | GradcheckCase,
    rng: Rng,
    shapes: Mapping[str, Sequence[int]] | None = None,
    analytic_transform: Callable[[Gradients], Gradients] | None = None,
) -> float:
    """
    Largest relative error between analytic and numerical gradients.

    Args:
        layer: Case name from ``GRADCHECK_CASES`` or a custom case
        rng: Source of inputs, parameters and the cotangent
        shapes: Overrides for the case's default tensor shapes
        analytic_transform: Applied to the analytic gradients before the
            comparison; lets tests verify that a broken backward is caught

    Returns:
        max over coordinates of |a - n| / max(|a|, |n|, 1e-8)

    Raises:
        KeyError: If the case name is unknown
        NonFiniteError: If any gradient coordinate is not finite
    """
    if isinstance(layer, str):
        if layer not in GRADCHECK_CASES:
            msg = f"Unknown gradcheck case {layer!r}; choose from {sorted(GRADCHECK_CASES)}"
            logger.error(msg)
            raise KeyError(msg)
        layer = GRADCHECK_CASES[layer]
    case = layer

    merged = {**case.shapes, **{k: tuple(v) for k, v in (shapes or {}).items()}}
    tensors = {name: rng.normal(shape, dtype=np.float64) for name, shape in merged.items()}
    for name in case.away_from_zero:
        tensors[name] = _push_from_zero(tensors[name])
    seed = rng.spawn(1).seed

    y, pullback = case.forward(tensors, seed)
    cot = rng.normal(y.shape, dtype=np.float64)
    analytic = pullback(cot)
    if analytic_transform is not None:
        analytic = analytic_transform(analytic)

    worst = 0.0
    for name, tensor in tensors.items():
        for idx in np.ndindex(tensor.shape):
            original = float(tensor[idx])
            step = STEP_SCALE * max(1.0, abs(original))
            tensor[idx] = original + step
            plus = _objective(case, tensors, seed, cot)
            tensor[idx] = original - step
            minus = _objective(case, tensors, seed, cot)
            tensor[idx] = original

            numeric = (plus - minus) / (2 * step)
            exact = float(analytic[name][idx])
            if not (np.isfinite(numeric) and np.isfinite(exact)):
                msg = f"{case.name}: non-finite gradient at {name}{list(idx)}"
                logger.error(msg)
                raise NonFiniteError(msg)
            error = abs(exact - numeric) / max(abs(exact), abs(numeric), 1e-8)
            worst = max(worst, error)

    logger.debug(f"gradcheck {case.name}: max relative error {worst:.3e}")
    return worst


def run_gradcheck_suite(rng: Rng, layers: Sequence[str] | None = None) -> list[GradcheckResult]:
    """Check every named case, each on its own spawned stream."""
    names = list(layers) if layers is not None else list(GRADCHECK_CASES)
    results = []
    for key, name in enumerate(names):
        error = gradcheck(name, rng.spawn(key))
        results.append(GradcheckResult(layer=name, max_rel_error=error))
        logger.info(f"gradcheck {name}: {error:.3e}")
    return results
