"""
Subject-independent splitting.

Subjects, not trials, are shuffled and partitioned, so no participant
contributes trials to more than one partition. Validation subjects are carved
from the training side only.
"""

import logging

import numpy as np
from numerics import Rng

from data.labels import binarize_valence
from data.models.epochs import EpochSet, LabeledEpochs, LabeledSplit

logger = logging.getLogger(__name__)

MIN_SUBJECTS = 3


def _share(n_subjects: int, fraction: float) -> int:
    # round half up, at least one subject
    return max(1, int(np.floor(n_subjects * fraction + 0.5)))


def _labeled(epochs: EpochSet, subjects: np.ndarray) -> LabeledEpochs:
    indices = np.flatnonzero(np.isin(epochs.subject_ids, subjects))
    part = epochs.select(indices)
    return LabeledEpochs(epochs=part, labels=binarize_valence(part.valence))


def split_subject_independent(
    epochs: EpochSet,
    test_fraction: float = 0.2,
    val_fraction: float = 0.125,
    rng: Rng | None = None,
) -> LabeledSplit:
    """
    Partition an epoch set into subject-disjoint train, validation and test sets.

    Args:
        epochs: All trials
        test_fraction: Share of subjects held out for testing
        val_fraction: Share of the remaining subjects used for validation
        rng: Shuffles the subject order

    Returns:
        LabeledSplit with binarized valence labels; trials keep file order
        within each partition

    Raises:
        ValueError: If there are too few subjects for every partition to get one
    """
    for name, fraction in (("test", test_fraction), ("val", val_fraction)):
        if not 0 < fraction < 1:
            msg = f"The {name} fraction must be in (0, 1), got {fraction}"
            logger.error(msg)
            raise ValueError(msg)

    subjects = np.asarray(epochs.subjects, dtype=np.uint32)
    if len(subjects) < MIN_SUBJECTS:
        msg = (
            f"A subject-independent split needs at least {MIN_SUBJECTS} distinct "
            f"subjects, got {len(subjects)}"
        )
        logger.error(msg)
        raise ValueError(msg)

    rng = rng or Rng(0)
    shuffled = subjects[rng.permutation(len(subjects))]

    n_test = _share(len(subjects), test_fraction)
    n_val = _share(len(subjects) - n_test, val_fraction)
    n_train = len(subjects) - n_test - n_val
    if n_train < 1:
        msg = (
            f"{len(subjects)} subjects leave no training subjects after "
            f"{n_test} test and {n_val} validation subjects; at least "
            f"{n_test + n_val + 1} are needed for these fractions"
        )
        logger.error(msg)
        raise ValueError(msg)

    test_subjects = shuffled[:n_test]
    val_subjects = shuffled[n_test : n_test + n_val]
    train_subjects = shuffled[n_test + n_val :]
    logger.info(
        f"Split {len(subjects)} subjects into {n_train} train, {n_val} val, "
        f"{n_test} test"
    )

    return LabeledSplit(
        train=_labeled(epochs, train_subjects),
        val=_labeled(epochs, val_subjects),
        test=_labeled(epochs, test_subjects),
    )
