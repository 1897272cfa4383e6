from data.errors import (
    BadMagicError,
    EpochFormatError,
    TruncatedPayloadError,
    VersionMismatchError,
)
from data.labels import binarize_valence
from data.loader import load_epochset, save_epochset
from data.models.epochs import EpochSet, LabeledEpochs, LabeledSplit, ValenceClass
from data.spectral import BandpowerThresholdClassifier, band_power, posterior_channels
from data.split import split_subject_independent
from data.synthetic import generate_synthetic
from data.transforms import bandpass_filter, standardize

__all__ = [
    "BadMagicError",
    "BandpowerThresholdClassifier",
    "EpochFormatError",
    "EpochSet",
    "LabeledEpochs",
    "LabeledSplit",
    "TruncatedPayloadError",
    "ValenceClass",
    "VersionMismatchError",
    "band_power",
    "bandpass_filter",
    "binarize_valence",
    "generate_synthetic",
    "load_epochset",
    "posterior_channels",
    "save_epochset",
    "split_subject_independent",
    "standardize",
]
