"""
Named, ordered parameter registry of the classifier.

Trainable names, in definition order:

    conv1.kernel             [F1, 1, 1, temporal_kernel]
    bn1.gamma, bn1.beta      [F1]
    depthwise.kernel         [F1, D, n_channels, 1]
    bn2.gamma, bn2.beta      [F1 * D]
    separable.depth_kernel   [F1 * D, 1, 1, sep_kernel]
    separable.point_kernel   [F2, F1 * D, 1, 1]
    bn3.gamma, bn3.beta      [F2]
    dense.w, dense.b         [flat, dense_units], [dense_units]   (omitted when dense_units = 0)
    head.w, head.b           [dense_units or flat, n_classes], [n_classes]

Buffers: bn1/bn2/bn3 running_mean and running_var, in that order.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict

from eegnet.models.config import ArchConfig

BN_LAYERS = ("bn1", "bn2", "bn3")


def trainable_shapes(arch: ArchConfig) -> dict[str, tuple[int, ...]]:
    f1d = arch.F1 * arch.D
    shapes: dict[str, tuple[int, ...]] = {
        "conv1.kernel": (arch.F1, 1, 1, arch.temporal_kernel),
        "bn1.gamma": (arch.F1,),
        "bn1.beta": (arch.F1,),
        "depthwise.kernel": (arch.F1, arch.D, arch.n_channels, 1),
        "bn2.gamma": (f1d,),
        "bn2.beta": (f1d,),
        "separable.depth_kernel": (f1d, 1, 1, arch.sep_kernel),
        "separable.point_kernel": (arch.F2, f1d, 1, 1),
        "bn3.gamma": (arch.F2,),
        "bn3.beta": (arch.F2,),
    }
    head_inputs = arch.flat_features
    if arch.dense_units:
        shapes["dense.w"] = (arch.flat_features, arch.dense_units)
        shapes["dense.b"] = (arch.dense_units,)
        head_inputs = arch.dense_units
    shapes["head.w"] = (head_inputs, arch.n_classes)
    shapes["head.b"] = (arch.n_classes,)
    return shapes


def buffer_shapes(arch: ArchConfig) -> dict[str, tuple[int, ...]]:
    widths = (arch.F1, arch.F1 * arch.D, arch.F2)
    shapes: dict[str, tuple[int, ...]] = {}
    for layer, width in zip(BN_LAYERS, widths):
        shapes[f"{layer}.running_mean"] = (width,)
        shapes[f"{layer}.running_var"] = (width,)
    return shapes


class ModelParams(BaseModel):
    """Trainable tensors plus batch-norm running statistics."""

    model_config: ConfigDict = ConfigDict(arbitrary_types_allowed=True)

    arch: ArchConfig
    trainable: dict[str, np.ndarray]
    buffers: dict[str, np.ndarray]

    def trainable_count(self) -> int:
        return sum(int(t.size) for t in self.trainable.values())

    def replace(
        self,
        trainable: dict[str, np.ndarray] | None = None,
        buffers: dict[str, np.ndarray] | None = None,
    ) -> "ModelParams":
        """New params sharing unchanged tensors with this one."""
        return ModelParams(
            arch=self.arch,
            trainable=dict(self.trainable if trainable is None else trainable),
            buffers=dict(self.buffers if buffers is None else buffers),
        )

    def tensors(self) -> dict[str, np.ndarray]:
        """Trainables then buffers, in definition order."""
        return {**self.trainable, **self.buffers}

    def equals(self, other: "ModelParams") -> bool:
        """Bit-exact comparison including names, order and architecture."""
        mine, theirs = self.tensors(), other.tensors()
        return (
            self.arch == other.arch
            and list(mine) == list(theirs)
            and all(
                mine[k].dtype == theirs[k].dtype
                and mine[k].shape == theirs[k].shape
                and mine[k].tobytes() == theirs[k].tobytes()
                for k in mine
            )
        )
