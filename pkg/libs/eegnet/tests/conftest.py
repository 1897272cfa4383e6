import numpy as np
import pytest
from data.labels import binarize_valence
from data.models.epochs import LabeledEpochs
from data.synthetic import generate_synthetic
from data.transforms import standardize
from eegnet.models import ArchConfig


@pytest.fixture
def small_arch() -> ArchConfig:
    """A few hundred parameters over 4 channels x 64 samples."""
    return ArchConfig(
        n_channels=4,
        n_samples=64,
        F1=2,
        D=2,
        F2=4,
        temporal_kernel=8,
        sep_kernel=4,
        pool1=4,
        pool2=4,
        dense_units=8,
    )


@pytest.fixture
def small_splits() -> tuple[LabeledEpochs, LabeledEpochs]:
    """Subjects 1-3 for training, subject 4 for validation."""
    epochs = standardize(generate_synthetic(4, 6, 4, 64, 125.0, seed=0))
    labels = binarize_valence(epochs.valence)
    train = np.flatnonzero(epochs.subject_ids <= 3)
    val = np.flatnonzero(epochs.subject_ids == 4)
    return (
        LabeledEpochs(epochs=epochs.select(train), labels=labels[train]),
        LabeledEpochs(epochs=epochs.select(val), labels=labels[val]),
    )
