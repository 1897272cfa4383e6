from __future__ import annotations

import logging
from abc import abstractmethod

from pydantic import BaseModel

from data.models.epochs import EpochSet

logger = logging.getLogger(__name__)


class BaseTransform(BaseModel):
    """
    Base class for all epoch transforms.
    """

    def __call__(self, epochs: EpochSet, **kwargs) -> EpochSet:
        """
        Make the transform callable with default logic.

        Insert other routine work here.
        """
        if epochs.trials.size == 0:
            msg = "Cannot transform an empty epoch set"
            logger.error(msg)
            raise ValueError(msg)

        logger.info(
            f"Applying transform {self.__class__.__name__} to {epochs.n_trials} trials"
        )
        # Copy so the caller's epochs are never modified in place
        result = self.apply(epochs=epochs.model_copy(deep=True), **kwargs)
        return result

    @abstractmethod
    def apply(self, epochs: EpochSet, **kwargs) -> EpochSet:
        """
        Apply the transform to the trials.
        """
        raise NotImplementedError
