"""
Dense tensors and elementary math.

A tensor is a row-major ``numpy.ndarray``. Single precision is the default
compute dtype; double precision is used where numerical differentiation needs
it (see ``eegnet.layers.gradcheck``).
"""

import logging
from collections.abc import Sequence
from math import prod
from typing import TypeAlias

import numpy as np
from numpy.typing import DTypeLike, NDArray

logger = logging.getLogger(__name__)

Tensor: TypeAlias = NDArray[np.floating]

DEFAULT_DTYPE = np.float32


class ShapeError(ValueError):
    """Raised when tensor shapes or lengths do not agree."""

    pass


def _validate_shape(shape: Sequence[int]) -> tuple[int, ...]:
    shape = tuple(int(dim) for dim in shape)
    if any(dim < 1 for dim in shape):
        msg = f"Tensor dimensions must be positive, got {shape}"
        logger.error(msg)
        raise ShapeError(msg)
    return shape


def tensor_create(
    shape: Sequence[int],
    fill: float | Sequence[float] = 0.0,
    dtype: DTypeLike = DEFAULT_DTYPE,
) -> Tensor:
    """
    Create a row-major tensor.

    Args:
        shape: Positive dimensions
        fill: A scalar broadcast to every element, or the full list of values
        dtype: Element type (single precision by default)

    Returns:
        Tensor holding exactly the given values

    Raises:
        ShapeError: If a data list does not hold product(shape) values
    """
    shape = _validate_shape(shape)
    if np.isscalar(fill):
        return np.full(shape, fill, dtype=dtype)

    data = np.asarray(fill, dtype=dtype).reshape(-1)
    if data.size != prod(shape):
        msg = (
            f"Shape {shape} needs {prod(shape)} values, "
            f"got a data list of length {data.size}"
        )
        logger.error(msg)
        raise ShapeError(msg)
    return data.reshape(shape)


def reshape(tensor: Tensor, shape: Sequence[int]) -> Tensor:
    """Reshape without changing the number or order of values."""
    shape = _validate_shape(shape)
    if prod(shape) != tensor.size:
        msg = f"Cannot reshape {tensor.shape} ({tensor.size} values) to {shape}"
        logger.error(msg)
        raise ShapeError(msg)
    return tensor.reshape(shape)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """
    Matrix product of two rank-2 tensors.

    Raises:
        ShapeError: If either operand is not rank 2 or inner dimensions differ
    """
    if a.ndim != 2 or b.ndim != 2:
        msg = f"matmul needs rank-2 operands, got ranks {a.ndim} and {b.ndim}"
        logger.error(msg)
        raise ShapeError(msg)
    if a.shape[1] != b.shape[0]:
        msg = (
            f"matmul inner dimensions differ: a is {a.shape[0]}x{a.shape[1]}, "
            f"b is {b.shape[0]}x{b.shape[1]}"
        )
        logger.error(msg)
        raise ShapeError(msg)
    return a @ b
