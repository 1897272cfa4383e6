"""
Bandpower estimation and a threshold classifier used as an oracle baseline.
"""

import logging

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, Field

from data.models.epochs import EpochSet, ValenceClass

logger = logging.getLogger(__name__)

ALPHA_BAND_HZ = (8.0, 12.0)


def band_power(
    signals: NDArray[np.floating], sample_rate_hz: float, low_hz: float, high_hz: float
) -> NDArray[np.float64]:
    """
    One-sided DFT power inside [low_hz, high_hz] along the last axis.

    For a unit sine whose frequency sits on a DFT bin inside the band the
    result is 0.5, the sine's mean power.
    """
    n_samples = signals.shape[-1]
    spectrum = np.fft.rfft(np.asarray(signals, dtype=np.float64), axis=-1)
    freqs = np.fft.rfftfreq(n_samples, d=1.0 / sample_rate_hz)
    power = np.abs(spectrum) ** 2 / n_samples**2
    # Interior bins appear twice in the two-sided spectrum
    interior = (freqs > 0) & (freqs < sample_rate_hz / 2)
    power[..., interior] *= 2
    in_band = (freqs >= low_hz) & (freqs <= high_hz)
    return power[..., in_band].sum(axis=-1)


def posterior_channels(n_channels: int) -> NDArray[np.int64]:
    """The last quarter of channel indices (at least one channel)."""
    count = max(1, n_channels // 4)
    return np.arange(n_channels - count, n_channels)


class BandpowerThresholdClassifier(BaseModel):
    """
    Predicts High when mean log alpha bandpower over the posterior channels
    exceeds a threshold fitted on training trials.
    """

    low_hz: float = Field(default=ALPHA_BAND_HZ[0])
    high_hz: float = Field(default=ALPHA_BAND_HZ[1])
    threshold: float | None = Field(
        default=None, description="Fitted log-bandpower threshold."
    )

    def features(self, epochs: EpochSet) -> NDArray[np.float64]:
        channels = posterior_channels(epochs.n_channels)
        power = band_power(
            epochs.trials[:, channels, :], epochs.sample_rate_hz, self.low_hz, self.high_hz
        )
        return np.log(power + 1e-12).mean(axis=-1)

    def fit(self, epochs: EpochSet, labels: NDArray[np.integer]) -> "BandpowerThresholdClassifier":
        labels = np.asarray(labels)
        features = self.features(epochs)
        if not (np.any(labels == ValenceClass.LOW) and np.any(labels == ValenceClass.HIGH)):
            msg = "Fitting the bandpower threshold needs trials of both classes"
            logger.error(msg)
            raise ValueError(msg)
        low_mean = features[labels == ValenceClass.LOW].mean()
        high_mean = features[labels == ValenceClass.HIGH].mean()
        self.threshold = float((low_mean + high_mean) / 2)
        logger.info(f"Bandpower threshold fitted at {self.threshold:.4f}")
        return self

    def predict(self, epochs: EpochSet) -> NDArray[np.int64]:
        if self.threshold is None:
            msg = "Call fit before predict"
            logger.error(msg)
            raise ValueError(msg)
        return (self.features(epochs) > self.threshold).astype(np.int64)
