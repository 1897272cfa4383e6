"""
Configuration management for the sen command line.
"""

import logging
import os
import tomllib
from pathlib import Path
from typing import Any, Optional

from dotenv import load_dotenv
from eegnet.models import ArchConfig
from eegnet.training import TrainConfig
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

load_dotenv()

CHECKPOINT_NAME = "checkpoint.sten"
EPOCH_LOG_NAME = "epochs.csv"
MANIFEST_NAME = "manifest.json"
METRICS_NAME = "metrics.json"
BASELINE_NAME = "baseline.json"


def manifest_path(output: Path) -> Path:
    """Manifest written beside a single output file, e.g. d.eege -> d.manifest.json."""
    return output.with_name(f"{output.stem}.{MANIFEST_NAME}")


class UsageError(ValueError):
    """Bad flags, subcommand, config key or value. Exit code 1."""

    pass


class Config:
    """Configuration class for managing environment variables and settings."""

    # Logging Configuration
    LOG_LEVEL: str = os.getenv("SEN_LOG", "INFO").upper()
    LOG_FORMAT: str = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"

    # Run Configuration
    CONFIG_PATH: Optional[str] = os.getenv("SEN_CONFIG")

    @classmethod
    def log_level(cls) -> int:
        """Numeric level for SEN_LOG; unknown names fall back to INFO."""
        return logging.getLevelNamesMapping().get(cls.LOG_LEVEL, logging.INFO)


class RunConfig(BaseModel):
    """
    Every setting of a run. Defaults are the full-size training setup;
    a TOML file may override them and command-line flags override the file.
    """

    model_config: ConfigDict = ConfigDict(extra="forbid")

    # Paths and randomness
    data: Optional[Path] = Field(default=None, description="Epoch file (.eege)")
    out: Optional[Path] = Field(default=None, description="Run directory or output file")
    checkpoint: Optional[Path] = Field(default=None, description="Checkpoint scored by eval")
    seed: int = Field(default=0, ge=0, lt=2**64)

    # Splitting and preprocessing
    test_fraction: float = Field(default=0.2, gt=0.0, lt=1.0)
    val_fraction: float = Field(default=0.125, gt=0.0, lt=1.0)
    bandpass_low_hz: Optional[float] = Field(default=None, gt=0.0)
    bandpass_high_hz: Optional[float] = Field(default=None, gt=0.0)
    test_only: bool = Field(default=False, description="eval scores only the test subjects")

    # Synthesis
    synth_subjects: int = Field(default=20, ge=1)
    synth_trials_per_subject: int = Field(default=12, ge=1)
    synth_channels: int = Field(default=16, ge=1)
    synth_samples: int = Field(default=250, ge=1)
    synth_sample_rate_hz: float = Field(default=125.0, gt=0.0)

    # Architecture (channel and sample counts come from the data)
    F1: int = 8
    D: int = 2
    F2: int = 16
    temporal_kernel: int = 64
    sep_kernel: int = 16
    pool1: int = 4
    pool2: int = 8
    dropout_p: float = 0.5
    dense_units: int = 64
    maxnorm_depthwise: Optional[float] = 1.0
    maxnorm_dense: Optional[float] = 0.25

    # Optimization
    learning_rate: float = 0.01
    max_epochs: int = 200
    patience: int = 35
    batch_size: int = 16
    beta1: float = 0.9
    beta2: float = 0.999
    eps_adam: float = 1e-8

    @model_validator(mode="after")
    def check_bandpass(self) -> "RunConfig":
        if (self.bandpass_low_hz is None) != (self.bandpass_high_hz is None):
            raise ValueError("Set both bandpass_low_hz and bandpass_high_hz, or neither")
        return self

    @model_validator(mode="after")
    def check_patience(self) -> "RunConfig":
        if self.patience >= self.max_epochs:
            raise ValueError(
                f"patience ({self.patience}) must be below max_epochs ({self.max_epochs}); "
                "lower --patience or raise --epochs"
            )
        return self

    @property
    def bandpass(self) -> tuple[float, float] | None:
        if self.bandpass_low_hz is None or self.bandpass_high_hz is None:
            return None
        return self.bandpass_low_hz, self.bandpass_high_hz

    def arch_config(self, n_channels: int, n_samples: int) -> ArchConfig:
        fields = self.model_dump(include=set(ArchConfig.model_fields))
        return ArchConfig(n_channels=n_channels, n_samples=n_samples, **fields)

    def train_config(self, run_dir: Path, seed: int) -> TrainConfig:
        fields = self.model_dump(include=set(TrainConfig.model_fields) - {"seed"})
        return TrainConfig(
            **fields,
            seed=seed,
            checkpoint_path=run_dir / CHECKPOINT_NAME,
            log_path=run_dir / EPOCH_LOG_NAME,
        )


def _read_toml(path: Path) -> dict[str, Any]:
    try:
        with path.open("rb") as handle:
            return tomllib.load(handle)
    except FileNotFoundError as e:
        raise UsageError(f"Config file not found: {path}") from e
    except tomllib.TOMLDecodeError as e:
        raise UsageError(f"Config file {path} is not valid TOML: {e}") from e


def resolve_run_config(
    config_path: Optional[Path] = None, overrides: Optional[dict[str, Any]] = None
) -> RunConfig:
    """
    Merge defaults, the config file and flag overrides (flags win).

    Raises:
        UsageError: On an unknown key, a bad value or an unreadable file
    """
    values: dict[str, Any] = {}
    if config_path is None and Config.CONFIG_PATH:
        config_path = Path(Config.CONFIG_PATH)
    if config_path is not None:
        values.update(_read_toml(Path(config_path)))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})

    try:
        return RunConfig(**values)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(map(str, err['loc'])) or 'config'}: {err['msg']}" for err in e.errors()
        )
        raise UsageError(f"Invalid run configuration: {problems}") from e


# Global config instance
config = Config()
