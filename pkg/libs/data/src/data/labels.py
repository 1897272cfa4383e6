import logging
from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from data.models.epochs import VALENCE_MAX, VALENCE_MIN, ValenceClass

logger = logging.getLogger(__name__)

# A rating of exactly 5 counts as High.
HIGH_THRESHOLD = 5.0


def binarize_valence(ratings: Sequence[float] | NDArray) -> NDArray[np.int64]:
    """
    Map valence ratings to 0 (Low) / 1 (High).

    Raises:
        ValueError: If a rating is outside [1, 9]; the message names its index
    """
    ratings = np.asarray(ratings, dtype=np.float64).reshape(-1)
    outside = np.flatnonzero(~((ratings >= VALENCE_MIN) & (ratings <= VALENCE_MAX)))
    if outside.size:
        index = int(outside[0])
        msg = (
            f"Valence rating {ratings[index]} at index {index} is outside "
            f"[{VALENCE_MIN:g}, {VALENCE_MAX:g}]"
        )
        logger.error(msg)
        raise ValueError(msg)
    return np.where(ratings >= HIGH_THRESHOLD, ValenceClass.HIGH, ValenceClass.LOW).astype(
        np.int64
    )
