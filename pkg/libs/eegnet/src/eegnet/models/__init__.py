from eegnet.models.checkpoint import (
    BadMagicError,
    CheckpointError,
    TruncatedPayloadError,
    VersionMismatchError,
    load_checkpoint,
    save_checkpoint,
)
from eegnet.models.config import ArchConfig
from eegnet.models.network import (
    ForwardTrace,
    apply_maxnorm,
    backward,
    build_model,
    forward,
    labels_from_logits,
    predict,
    predict_batches,
)
from eegnet.models.params import ModelParams, buffer_shapes, trainable_shapes

__all__ = [
    "ArchConfig",
    "BadMagicError",
    "CheckpointError",
    "ForwardTrace",
    "ModelParams",
    "TruncatedPayloadError",
    "VersionMismatchError",
    "apply_maxnorm",
    "backward",
    "buffer_shapes",
    "build_model",
    "forward",
    "labels_from_logits",
    "load_checkpoint",
    "predict",
    "predict_batches",
    "save_checkpoint",
    "trainable_shapes",
]
