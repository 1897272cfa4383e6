"""
Saved state between a layer's forward and backward pass, and the registry
that maps each forward op to its vector-Jacobian product.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np
from numerics import ShapeError, Tensor

logger = logging.getLogger(__name__)

Gradients = dict[str, Tensor]
BackwardRule = Callable[[dict[str, Any], Tensor], Gradients]

_BACKWARD_RULES: dict[str, BackwardRule] = {}


class Mode(StrEnum):
    TRAIN = "train"
    INFER = "infer"


class ContextReuseError(ValueError):
    """Raised when backward is called twice on one forward context."""

    pass


class NonFiniteError(ValueError):
    """Raised when a gradient or loss stops being finite."""

    pass


@dataclass
class LayerContext:
    """What a forward call saved for its backward pass."""

    op: str
    output_shape: tuple[int, ...]
    saved: dict[str, Any] = field(default_factory=dict)
    used: bool = False


def register_backward(op: str) -> Callable[[BackwardRule], BackwardRule]:
    """Register the backward rule of a forward op."""

    def decorator(rule: BackwardRule) -> BackwardRule:
        _BACKWARD_RULES[op] = rule
        return rule

    return decorator


def layer_backward(ctx: LayerContext, cotangent: Tensor) -> Gradients:
    """
    Vector-Jacobian product of the forward call that produced ``ctx``.

    Args:
        ctx: Context returned by a forward op, not yet consumed
        cotangent: Gradient of the loss w.r.t. the forward output

    Returns:
        Gradients keyed "x" for the input plus one key per parameter

    Raises:
        ContextReuseError: If the context was already consumed
        ShapeError: If the cotangent shape differs from the forward output
    """
    if ctx.used:
        msg = f"Backward already ran for this {ctx.op} context"
        logger.error(msg)
        raise ContextReuseError(msg)
    cotangent = np.asarray(cotangent)
    if cotangent.shape != ctx.output_shape:
        msg = (
            f"{ctx.op} backward expects a cotangent of shape {ctx.output_shape}, "
            f"got {cotangent.shape}"
        )
        logger.error(msg)
        raise ShapeError(msg)
    ctx.used = True
    return _BACKWARD_RULES[ctx.op](ctx.saved, cotangent)
