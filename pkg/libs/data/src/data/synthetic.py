"""
Synthetic EEG that stands in for recordings that cannot be redistributed.

Each trial is 1/f background noise plus a little white noise, scaled per
channel by a gain vector fixed for each subject. High-valence trials carry a
Hann-windowed 10 Hz burst on the posterior channels, which makes the class
detectable from alpha bandpower alone.
"""

import logging

import numpy as np
from numerics import Rng
from scipy.signal import windows

from data.models.epochs import EpochSet
from data.spectral import posterior_channels

logger = logging.getLogger(__name__)

BURST_HZ = 10.0
BURST_AMPLITUDE = 2.0
WHITE_NOISE_STD = 0.3
GAIN_LOG_STD = 0.25
SCALE_UV = 10.0


def _pink_noise(rng: Rng, shape: tuple[int, ...], n_samples: int) -> np.ndarray:
    """Unit-variance noise with a 1/f power spectrum along the last axis."""
    n_freqs = n_samples // 2 + 1
    real = rng.normal((*shape, n_freqs), dtype=np.float64)
    imag = rng.normal((*shape, n_freqs), dtype=np.float64)
    freqs = np.arange(n_freqs, dtype=np.float64)
    amplitude = np.zeros(n_freqs)
    amplitude[1:] = 1.0 / np.sqrt(freqs[1:])
    noise = np.fft.irfft((real + 1j * imag) * amplitude, n=n_samples, axis=-1)
    std = noise.std(axis=-1, keepdims=True)
    return noise / np.where(std > 0, std, 1.0)


def _valences(rng: Rng, n_trials: int) -> np.ndarray:
    """Balanced ratings: half High in [5, 9), half Low in [1, 4.9); odd extra is random."""
    n_high = n_trials // 2 + (int(rng.random([1])[0] < 0.5) if n_trials % 2 else 0)
    high = 5.0 + 4.0 * rng.random([n_high])
    low = 1.0 + 3.9 * rng.random([n_trials - n_high])
    ratings = np.concatenate([high, low])
    return ratings[rng.permutation(n_trials)]


def _burst(rng: Rng, n_samples: int, sample_rate_hz: float) -> np.ndarray:
    """One Hann-windowed 10 Hz burst covering 50-80% of the trial."""
    length = max(1, int(round(n_samples * (0.5 + 0.3 * rng.random([1])[0]))))
    start = int(rng.random([1])[0] * (n_samples - length + 1))
    phase = 2 * np.pi * rng.random([1])[0]
    amplitude = BURST_AMPLITUDE * (0.75 + 0.5 * rng.random([1])[0])

    t = np.arange(length) / sample_rate_hz
    burst = np.zeros(n_samples)
    burst[start : start + length] = (
        amplitude * windows.hann(length) * np.sin(2 * np.pi * BURST_HZ * t + phase)
    )
    return burst


def generate_synthetic(
    n_subjects: int,
    trials_per_subject: int,
    n_channels: int,
    n_samples: int,
    sample_rate_hz: float,
    seed: int,
) -> EpochSet:
    """
    Generate a seeded synthetic epoch set.

    Returns:
        EpochSet with trials shaped (n_subjects * trials_per_subject, n_channels,
        n_samples), subject ids 1..n_subjects in blocks
    """
    counts = {
        "n_subjects": n_subjects,
        "trials_per_subject": trials_per_subject,
        "n_channels": n_channels,
        "n_samples": n_samples,
    }
    for name, count in counts.items():
        if count < 1:
            msg = f"{name} must be at least 1, got {count}"
            logger.error(msg)
            raise ValueError(msg)

    rng = Rng(seed)
    designated = posterior_channels(n_channels)
    n_trials = n_subjects * trials_per_subject
    trials = np.empty((n_trials, n_channels, n_samples), dtype=np.float32)
    subject_ids = np.repeat(np.arange(1, n_subjects + 1, dtype=np.uint32), trials_per_subject)
    valence = np.empty(n_trials, dtype=np.float32)

    for subject in range(n_subjects):
        gains = np.exp(rng.normal([n_channels], std=GAIN_LOG_STD, dtype=np.float64))
        ratings = _valences(rng, trials_per_subject)
        background = _pink_noise(rng, (trials_per_subject, n_channels), n_samples)
        background += rng.normal(
            (trials_per_subject, n_channels, n_samples), std=WHITE_NOISE_STD, dtype=np.float64
        )

        for local, rating in enumerate(ratings):
            if rating >= 5.0:
                background[local, designated, :] += _burst(rng, n_samples, sample_rate_hz)

        first = subject * trials_per_subject
        block = slice(first, first + trials_per_subject)
        trials[block] = (SCALE_UV * gains[None, :, None] * background).astype(np.float32)
        valence[block] = ratings

    logger.info(
        f"Generated {n_trials} synthetic trials from {n_subjects} subjects "
        f"({n_channels} channels x {n_samples} samples at {sample_rate_hz:g} Hz)"
    )
    return EpochSet(
        trials=trials,
        subject_ids=subject_ids,
        valence=valence,
        sample_rate_hz=sample_rate_hz,
    )
