from numerics.rng import ALGORITHM, Rng, rng_normal
from numerics.tensor import (
    DEFAULT_DTYPE,
    ShapeError,
    Tensor,
    matmul,
    reshape,
    tensor_create,
)

__all__ = [
    "ALGORITHM",
    "DEFAULT_DTYPE",
    "Rng",
    "ShapeError",
    "Tensor",
    "matmul",
    "reshape",
    "rng_normal",
    "tensor_create",
]
