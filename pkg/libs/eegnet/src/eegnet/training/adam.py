"""
Adam with bias correction.
"""

import logging

import numpy as np
from numerics import ShapeError, Tensor
from pydantic import BaseModel, ConfigDict, Field

from eegnet.layers.context import NonFiniteError

logger = logging.getLogger(__name__)


class AdamState(BaseModel):
    """First and second moments per parameter, and the step count."""

    model_config: ConfigDict = ConfigDict(arbitrary_types_allowed=True)

    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]
    t: int = Field(default=0, ge=0)

    @classmethod
    def fresh(cls, params: dict[str, Tensor]) -> "AdamState":
        return cls(
            m={name: np.zeros_like(p) for name, p in params.items()},
            v={name: np.zeros_like(p) for name, p in params.items()},
        )


def adam_step(
    params: dict[str, Tensor],
    grads: dict[str, Tensor],
    state: AdamState,
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> tuple[dict[str, Tensor], AdamState]:
    """
    One Adam update of every parameter.

    Returns:
        New parameter tensors and state; the inputs are left untouched

    Raises:
        ShapeError: If a gradient or moment is missing or has the wrong shape
        NonFiniteError: If a gradient holds NaN or infinity, naming the parameter
    """
    for name, p in params.items():
        if name not in grads or grads[name].shape != p.shape:
            got = grads[name].shape if name in grads else "nothing"
            msg = f"Gradient for {name} must have shape {p.shape}, got {got}"
            logger.error(msg)
            raise ShapeError(msg)
        if name not in state.m or state.m[name].shape != p.shape:
            msg = f"Adam state does not match parameter {name}"
            logger.error(msg)
            raise ShapeError(msg)
        if not np.all(np.isfinite(grads[name])):
            msg = f"Non-finite gradient for parameter {name}"
            logger.error(msg)
            raise NonFiniteError(msg)

    t = state.t + 1
    correction1 = 1.0 - beta1**t
    correction2 = 1.0 - beta2**t

    new_params, m, v = {}, {}, {}
    for name, p in params.items():
        g = grads[name]
        m[name] = beta1 * state.m[name] + (1.0 - beta1) * g
        v[name] = beta2 * state.v[name] + (1.0 - beta2) * g * g
        m_hat = m[name] / correction1
        v_hat = v[name] / correction2
        new_params[name] = (p - lr * m_hat / (np.sqrt(v_hat) + eps)).astype(p.dtype, copy=False)

    return new_params, AdamState(m=m, v=v, t=t)
