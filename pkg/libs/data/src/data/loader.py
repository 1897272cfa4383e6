"""
Binary epoch file format.

Layout (little-endian):

    magic "EEGE" | version u32 | n_trials u32 | n_channels u32 | n_samples u32
    | sample_rate f32
    then per trial: subject_id u32 | valence f32 | n_channels * n_samples f32
    (channel-major)

An optional JSON-lines sidecar (``<file>.jsonl``) lists trial index, subject id
and valence for inspection. The binary file is authoritative.
"""

import logging
import struct
from pathlib import Path

import numpy as np
import polars as pl

from data.errors import BadMagicError, TruncatedPayloadError, VersionMismatchError
from data.models.epochs import EpochSet

logger = logging.getLogger(__name__)

MAGIC = b"EEGE"
VERSION = 1

_HEADER = struct.Struct("<4sIIIIf")
_TRIAL_HEADER = struct.Struct("<If")


def manifest_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".jsonl")


def save_epochset(epochs: EpochSet, path: str | Path, manifest: bool = False) -> Path:
    """
    Write an epoch set to disk.

    Args:
        epochs: The trials to write
        path: Destination file
        manifest: Also write the JSON-lines sidecar

    Returns:
        Path of the written file
    """
    path = Path(path)
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        epochs.n_trials,
        epochs.n_channels,
        epochs.n_samples,
        epochs.sample_rate_hz,
    )
    payload = epochs.trials.astype("<f4", copy=False)

    with path.open("wb") as handle:
        handle.write(header)
        for index in range(epochs.n_trials):
            handle.write(
                _TRIAL_HEADER.pack(
                    int(epochs.subject_ids[index]), float(epochs.valence[index])
                )
            )
            handle.write(payload[index].tobytes())

    logger.info(
        f"Saved {epochs.n_trials} trials "
        f"({epochs.n_channels} channels x {epochs.n_samples} samples) to {path}"
    )

    if manifest:
        sidecar = manifest_path(path)
        pl.DataFrame(
            {
                "trial": np.arange(epochs.n_trials),
                "subject_id": epochs.subject_ids.astype(np.int64),
                "valence": epochs.valence,
            }
        ).write_ndjson(sidecar)
        logger.info(f"Wrote manifest {sidecar}")

    return path


def load_epochset(path: str | Path) -> EpochSet:
    """
    Read an epoch set written by ``save_epochset``.

    Raises:
        FileNotFoundError: If the file does not exist
        BadMagicError: If the file does not start with "EEGE"
        VersionMismatchError: If the format version is not supported
        TruncatedPayloadError: If the file ends before the declared trials
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")

    buffer = path.read_bytes()
    if len(buffer) < 4 or buffer[:4] != MAGIC:
        msg = f"Bad magic in {path}: expected {MAGIC!r}, got {buffer[:4]!r}"
        logger.error(msg)
        raise BadMagicError(msg)
    if len(buffer) < _HEADER.size:
        msg = f"Epoch file {path} truncated in header"
        logger.error(msg)
        raise TruncatedPayloadError(msg)

    _, version, n_trials, n_channels, n_samples, sample_rate = _HEADER.unpack_from(
        buffer
    )
    if version != VERSION:
        msg = f"Unsupported epoch file version {version} in {path}, expected {VERSION}"
        logger.error(msg)
        raise VersionMismatchError(msg)

    n_values = n_channels * n_samples
    record_size = _TRIAL_HEADER.size + 4 * n_values
    trials = np.empty((n_trials, n_channels, n_samples), dtype=np.float32)
    subject_ids = np.empty(n_trials, dtype=np.uint32)
    valence = np.empty(n_trials, dtype=np.float32)

    offset = _HEADER.size
    for index in range(n_trials):
        if offset + record_size > len(buffer):
            msg = f"Epoch file {path} truncated at trial {index} of {n_trials}"
            logger.error(msg)
            raise TruncatedPayloadError(msg)
        subject_ids[index], valence[index] = _TRIAL_HEADER.unpack_from(buffer, offset)
        trials[index] = np.frombuffer(
            buffer, dtype="<f4", count=n_values, offset=offset + _TRIAL_HEADER.size
        ).reshape(n_channels, n_samples)
        offset += record_size

    logger.info(
        f"Loaded {n_trials} trials ({n_channels} channels x {n_samples} samples "
        f"at {sample_rate:g} Hz) from {path}"
    )
    return EpochSet(
        trials=trials,
        subject_ids=subject_ids,
        valence=valence,
        sample_rate_hz=float(sample_rate),
    )
