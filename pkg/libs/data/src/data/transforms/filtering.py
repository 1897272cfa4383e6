from __future__ import annotations

import logging
from typing import override

import numpy as np
from pydantic import Field, model_validator
from scipy import signal

from data.models.epochs import EpochSet
from data.transforms.base import BaseTransform

logger = logging.getLogger(__name__)

DEFAULT_NUMTAPS = 251


def design_bandpass(
    low_hz: float, high_hz: float, sample_rate_hz: float, numtaps: int = DEFAULT_NUMTAPS
) -> np.ndarray:
    """
    Linear-phase windowed-sinc bandpass taps (Hamming window).

    Raises:
        ValueError: If the band is not inside (0, Nyquist)
    """
    nyquist = sample_rate_hz / 2
    if not 0 < low_hz < high_hz < nyquist:
        msg = (
            f"Band {low_hz:g}-{high_hz:g} Hz must satisfy 0 < low < high < "
            f"{nyquist:g} Hz (Nyquist at {sample_rate_hz:g} Hz)"
        )
        logger.error(msg)
        raise ValueError(msg)
    if numtaps % 2 == 0:
        msg = f"A bandpass FIR needs an odd number of taps, got {numtaps}"
        logger.error(msg)
        raise ValueError(msg)
    return signal.firwin(
        numtaps, [low_hz, high_hz], window="hamming", pass_zero=False, fs=sample_rate_hz
    )


class BandpassFilterTransform(BaseTransform):
    """
    Transform that applies a zero-phase FIR bandpass along time.

    The filter runs forward then backward; edges are padded by even
    (symmetric) reflection so the output keeps the input length.
    """

    low_hz: float = Field(gt=0, description="Lower band edge in Hz.")
    high_hz: float = Field(gt=0, description="Upper band edge in Hz.")
    numtaps: int = Field(default=DEFAULT_NUMTAPS, description="FIR length (odd).")

    @model_validator(mode="after")
    def validate_band(self):
        if self.low_hz >= self.high_hz:
            raise ValueError("The lower band edge must be below the upper edge.")
        return self

    @override
    def apply(self, epochs: EpochSet) -> EpochSet:
        """Filter every channel of every trial."""
        taps = design_bandpass(
            self.low_hz, self.high_hz, epochs.sample_rate_hz, self.numtaps
        )
        padlen = min(3 * len(taps), epochs.n_samples - 1)
        filtered = signal.filtfilt(
            taps,
            [1.0],
            epochs.trials.astype(np.float64),
            axis=-1,
            padtype="even",
            padlen=padlen,
        )
        return epochs.with_trials(filtered.astype(np.float32))


def bandpass_filter(epochs: EpochSet, low_hz: float, high_hz: float) -> EpochSet:
    """Zero-phase 251-tap Hamming bandpass between low_hz and high_hz."""
    return BandpassFilterTransform(low_hz=low_hz, high_hz=high_hz)(epochs)
