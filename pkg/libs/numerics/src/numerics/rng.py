"""
Seeded random number generation.

Every random draw in the project goes through ``Rng``, which wraps numpy's
PCG64 bit generator. PCG64 output for a given seed is identical on every
platform numpy supports, so a seed plus a call sequence fixes every stream.
"""

import logging
from collections.abc import Sequence

import numpy as np
from numpy.typing import DTypeLike, NDArray

from numerics.tensor import DEFAULT_DTYPE, Tensor, _validate_shape

logger = logging.getLogger(__name__)

ALGORITHM = "PCG64"


class Rng:
    """Single-owner random stream. Do not share one instance across threads."""

    def __init__(self, seed: int):
        if not 0 <= seed < 2**64:
            msg = f"Seed must be an unsigned 64-bit integer, got {seed}"
            logger.error(msg)
            raise ValueError(msg)
        self.seed = int(seed)
        self._generator = np.random.Generator(np.random.PCG64(self.seed))

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed}, algorithm={ALGORITHM})"

    def spawn(self, key: int) -> "Rng":
        """
        Derive an independent stream from this seed and an integer key.

        The child depends only on (seed, key), not on how much of the parent
        stream has been consumed.
        """
        child_seed = np.random.SeedSequence([self.seed, key]).generate_state(
            1, dtype=np.uint64
        )[0]
        return Rng(int(child_seed))

    def normal(
        self,
        shape: Sequence[int],
        mean: float = 0.0,
        std: float = 1.0,
        dtype: DTypeLike = DEFAULT_DTYPE,
    ) -> Tensor:
        if std < 0:
            msg = f"Standard deviation must be non-negative, got {std}"
            logger.error(msg)
            raise ValueError(msg)
        shape = _validate_shape(shape)
        return self._generator.normal(mean, std, size=shape).astype(dtype)

    def uniform(
        self,
        shape: Sequence[int],
        low: float = 0.0,
        high: float = 1.0,
        dtype: DTypeLike = DEFAULT_DTYPE,
    ) -> Tensor:
        shape = _validate_shape(shape)
        return self._generator.uniform(low, high, size=shape).astype(dtype)

    def permutation(self, n: int) -> NDArray[np.int64]:
        return self._generator.permutation(n)

    def random(self, shape: Sequence[int]) -> NDArray[np.float64]:
        """Uniform draws on [0, 1) in double precision."""
        return self._generator.random(size=_validate_shape(shape))


def rng_normal(
    rng: Rng,
    shape: Sequence[int],
    mean: float = 0.0,
    std: float = 1.0,
    dtype: DTypeLike = DEFAULT_DTYPE,
) -> Tensor:
    """I.i.d. normal draws; a pure function of (seed, call index)."""
    return rng.normal(shape, mean=mean, std=std, dtype=dtype)
