from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, model_validator


class TrainConfig(BaseModel):
    """Optimizer, batching and early-stopping settings."""

    learning_rate: float = Field(default=0.01, ge=0.0)
    max_epochs: int = Field(default=200, ge=1)
    patience: int = Field(default=35, ge=1)
    monitor: Literal["val_loss"] = "val_loss"
    batch_size: int = Field(default=16, ge=2, description="Train-mode batchnorm needs 2")
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    eps_adam: float = Field(default=1e-8, gt=0.0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    checkpoint_path: Path = Path("checkpoint.sten")
    log_path: Path | None = Field(default=None, description="Per-epoch CSV log")

    @model_validator(mode="after")
    def check_patience(self) -> "TrainConfig":
        if self.patience >= self.max_epochs:
            raise ValueError(
                f"patience must be below max_epochs ({self.max_epochs}), got {self.patience}"
            )
        return self
