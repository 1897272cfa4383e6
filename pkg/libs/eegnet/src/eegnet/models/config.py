"""
Architecture constants of the spatio-temporal EEG classifier.
"""

from pydantic import BaseModel, Field, model_validator


class ArchConfig(BaseModel):
    """
    Layer geometry: temporal conv -> depthwise spatial conv -> separable conv
    -> flatten -> dense (ReLU) -> softmax head.

    ``dense_units = 0`` removes the extra dense layer so the flattened
    features feed the head directly.
    """

    n_channels: int = Field(default=128, ge=1, description="Electrode count")
    n_samples: int = Field(default=875, ge=1, description="Samples per trial")
    F1: int = Field(default=8, ge=1, description="Temporal filters")
    D: int = Field(default=2, ge=1, description="Depth multiplier of the spatial conv")
    F2: int = Field(default=16, ge=1, description="Separable conv filters")
    temporal_kernel: int = Field(default=64, ge=1)
    sep_kernel: int = Field(default=16, ge=1)
    pool1: int = Field(default=4, ge=1)
    pool2: int = Field(default=8, ge=1)
    dropout_p: float = Field(default=0.5, ge=0.0, lt=1.0)
    dense_units: int = Field(default=64, ge=0, description="0 disables the extra dense layer")
    n_classes: int = Field(default=2, ge=2)
    maxnorm_depthwise: float | None = Field(default=1.0, gt=0.0)
    maxnorm_dense: float | None = Field(default=0.25, gt=0.0)

    @model_validator(mode="after")
    def check_geometry(self) -> "ArchConfig":
        if self.flat_width < 1:
            raise ValueError(
                f"n_samples // pool1 // pool2 must be >= 1, got "
                f"{self.n_samples} // {self.pool1} // {self.pool2} = {self.flat_width}"
            )
        if self.F2 != self.F1 * self.D:
            raise ValueError(f"F2 must equal F1 * D = {self.F1 * self.D}, got {self.F2}")
        return self

    @property
    def flat_width(self) -> int:
        return self.n_samples // self.pool1 // self.pool2

    @property
    def flat_features(self) -> int:
        return self.F2 * self.flat_width

    def trainable_count(self) -> int:
        """Trainable parameters implied by the geometry."""
        f1d = self.F1 * self.D
        count = (
            self.F1 * self.temporal_kernel
            + 2 * self.F1
            + f1d * self.n_channels
            + 2 * f1d
            + f1d * self.sep_kernel
            + f1d * self.F2
            + 2 * self.F2
        )
        head_inputs = self.flat_features
        if self.dense_units:
            count += self.flat_features * self.dense_units + self.dense_units
            head_inputs = self.dense_units
        return count + head_inputs * self.n_classes + self.n_classes
