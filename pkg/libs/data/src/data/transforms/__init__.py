from data.transforms.base import BaseTransform
from data.transforms.filtering import (
    BandpassFilterTransform,
    bandpass_filter,
    design_bandpass,
)
from data.transforms.standard import StandardizeTransform, standardize

__all__ = [
    "BandpassFilterTransform",
    "BaseTransform",
    "StandardizeTransform",
    "bandpass_filter",
    "design_bandpass",
    "standardize",
]
