"""
Binary checkpoint format.

Layout (little-endian):

    magic "STEN" | version u32
    | ArchConfig: n_channels, n_samples, F1, D, F2, temporal_kernel,
      sep_kernel, pool1, pool2 (u32) | dropout_p (f32) | dense_units,
      n_classes (u32) | maxnorm_depthwise, maxnorm_dense (f32, NaN = none)
    | tensor count u32
    then per tensor: name length u16 | UTF-8 name | rank u8 | dims u32 each
    | payload f32 row-major

Tensors are written trainables first, then batch-norm buffers, each in
definition order.
"""

import logging
import math
import struct
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from eegnet.models.config import ArchConfig
from eegnet.models.params import ModelParams, buffer_shapes, trainable_shapes

logger = logging.getLogger(__name__)

MAGIC = b"STEN"
VERSION = 1

_PREFIX = struct.Struct("<4sI")
_ARCH = struct.Struct("<9IfII2f")
_COUNT = struct.Struct("<I")
_NAME_LENGTH = struct.Struct("<H")
_RANK = struct.Struct("<B")

_ARCH_INTS = (
    "n_channels", "n_samples", "F1", "D", "F2",
    "temporal_kernel", "sep_kernel", "pool1", "pool2",
)


class CheckpointError(ValueError):
    """Base exception for unreadable checkpoints."""

    pass


class BadMagicError(CheckpointError):
    pass


class VersionMismatchError(CheckpointError):
    pass


class TruncatedPayloadError(CheckpointError):
    pass


def _optional(value: float | None) -> float:
    return math.nan if value is None else value


def _f32_to_python(value: float) -> float:
    # shortest decimal that round-trips through f32, so 0.1 reads back as 0.1
    return float(str(np.float32(value)))


def _pack_arch(arch: ArchConfig) -> bytes:
    return _ARCH.pack(
        *(getattr(arch, name) for name in _ARCH_INTS),
        arch.dropout_p,
        arch.dense_units,
        arch.n_classes,
        _optional(arch.maxnorm_depthwise),
        _optional(arch.maxnorm_dense),
    )


def _unpack_arch(values: tuple) -> dict:
    ints = dict(zip(_ARCH_INTS, values[:9]))
    dropout_p, dense_units, n_classes, depthwise, dense = values[9:]
    return {
        **ints,
        "dropout_p": _f32_to_python(dropout_p),
        "dense_units": dense_units,
        "n_classes": n_classes,
        "maxnorm_depthwise": None if math.isnan(depthwise) else _f32_to_python(depthwise),
        "maxnorm_dense": None if math.isnan(dense) else _f32_to_python(dense),
    }


def save_checkpoint(params: ModelParams, path: str | Path) -> Path:
    """Write params, including running statistics and the ArchConfig."""
    path = Path(path)
    tensors = params.tensors()
    chunks = [_PREFIX.pack(MAGIC, VERSION), _pack_arch(params.arch), _COUNT.pack(len(tensors))]
    for name, tensor in tensors.items():
        encoded = name.encode("utf-8")
        chunks.append(_NAME_LENGTH.pack(len(encoded)))
        chunks.append(encoded)
        chunks.append(_RANK.pack(tensor.ndim))
        chunks.append(struct.pack(f"<{tensor.ndim}I", *tensor.shape))
        chunks.append(np.ascontiguousarray(tensor, dtype="<f4").tobytes())

    path.write_bytes(b"".join(chunks))
    logger.info(f"Saved checkpoint with {len(tensors)} tensors to {path}")
    return path


class _Reader:
    def __init__(self, buffer: bytes, path: Path):
        self.buffer = buffer
        self.path = path
        self.offset = 0

    def take(self, size: int, what: str) -> memoryview:
        if self.offset + size > len(self.buffer):
            msg = f"Checkpoint {self.path} truncated in {what}"
            logger.error(msg)
            raise TruncatedPayloadError(msg)
        view = memoryview(self.buffer)[self.offset : self.offset + size]
        self.offset += size
        return view

    def unpack(self, layout: struct.Struct, what: str) -> tuple:
        return layout.unpack(self.take(layout.size, what))


def load_checkpoint(path: str | Path) -> ModelParams:
    """
    Read params written by ``save_checkpoint``.

    Raises:
        FileNotFoundError: If the file does not exist
        BadMagicError: If the file does not start with "STEN"
        VersionMismatchError: If the format version is not supported
        TruncatedPayloadError: If the file ends early
        CheckpointError: If the stored tensors do not fit the stored ArchConfig
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")

    buffer = path.read_bytes()
    if buffer[:4] != MAGIC:
        msg = f"Bad magic in {path}: expected {MAGIC!r}, got {buffer[:4]!r}"
        logger.error(msg)
        raise BadMagicError(msg)

    reader = _Reader(buffer, path)
    _, version = reader.unpack(_PREFIX, "header")
    if version != VERSION:
        msg = f"Unsupported checkpoint version {version} in {path}, expected {VERSION}"
        logger.error(msg)
        raise VersionMismatchError(msg)

    try:
        arch = ArchConfig(**_unpack_arch(reader.unpack(_ARCH, "architecture")))
    except ValidationError as e:
        msg = f"Checkpoint {path} holds an invalid architecture: {e}"
        logger.error(msg)
        raise CheckpointError(msg) from e

    (count,) = reader.unpack(_COUNT, "tensor count")
    tensors: dict[str, np.ndarray] = {}
    for index in range(count):
        what = f"tensor {index} of {count}"
        (length,) = reader.unpack(_NAME_LENGTH, what)
        name = bytes(reader.take(length, what)).decode("utf-8")
        (rank,) = reader.unpack(_RANK, what)
        shape = struct.unpack(f"<{rank}I", reader.take(4 * rank, what))
        size = int(np.prod(shape, dtype=np.int64))
        payload = reader.take(4 * size, what)
        tensors[name] = np.frombuffer(payload, dtype="<f4").astype(np.float32).reshape(shape)

    expected = {**trainable_shapes(arch), **buffer_shapes(arch)}
    if list(tensors) != list(expected) or any(
        tensors[name].shape != shape for name, shape in expected.items()
    ):
        msg = f"Checkpoint {path} tensors do not match its architecture"
        logger.error(msg)
        raise CheckpointError(msg)

    trainable_names = trainable_shapes(arch)
    params = ModelParams(
        arch=arch,
        trainable={name: tensors[name] for name in trainable_names},
        buffers={name: tensors[name] for name in buffer_shapes(arch)},
    )
    logger.info(f"Loaded checkpoint with {count} tensors from {path}")
    return params
