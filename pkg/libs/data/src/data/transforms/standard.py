from __future__ import annotations

from typing import override

import numpy as np
from pydantic import Field

from data.models.epochs import EpochSet
from data.transforms.base import BaseTransform


class StandardizeTransform(BaseTransform):
    """
    Transform that z-scores every channel of every trial along time.
    """

    eps: float = Field(
        default=1e-8, gt=0, description="Added to the standard deviation."
    )

    @override
    def apply(self, epochs: EpochSet) -> EpochSet:
        """Subtract the mean and divide by (population std + eps)."""
        trials = epochs.trials.astype(np.float64)
        mean = trials.mean(axis=-1, keepdims=True)
        std = trials.std(axis=-1, keepdims=True)
        standardized = (trials - mean) / (std + self.eps)
        return epochs.with_trials(standardized.astype(np.float32))


def standardize(epochs: EpochSet) -> EpochSet:
    """Per trial, per channel: (x - mean) / (std + 1e-8) along the time axis."""
    return StandardizeTransform()(epochs)
