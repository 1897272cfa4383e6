from enum import IntEnum

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

VALENCE_MIN = 1.0
VALENCE_MAX = 9.0


class ValenceClass(IntEnum):
    LOW = 0
    HIGH = 1


class EpochSet(BaseModel):
    """
    A collection of EEG trials shaped (trial, channel, sample).

    A subject id may own many trials.
    """

    model_config: ConfigDict = ConfigDict(arbitrary_types_allowed=True)

    trials: np.ndarray = Field(
        description="Trial data shaped (n_trials, n_channels, n_samples), microvolt scale."
    )
    subject_ids: np.ndarray = Field(description="Subject id of every trial.")
    valence: np.ndarray = Field(
        description="Self-reported valence rating of every trial, in [1, 9]."
    )
    sample_rate_hz: float = Field(gt=0, description="Sampling rate in Hz.")

    @field_validator("trials", mode="before")
    @classmethod
    def cast_trials(cls, value) -> NDArray[np.float32]:
        value = np.asarray(value, dtype=np.float32)
        if value.ndim != 3:
            raise ValueError(
                f"Trials must be shaped (trial, channel, sample), got {value.shape}"
            )
        return value

    @field_validator("subject_ids", mode="before")
    @classmethod
    def cast_subject_ids(cls, value) -> NDArray[np.uint32]:
        return np.asarray(value, dtype=np.uint32).reshape(-1)

    @field_validator("valence", mode="before")
    @classmethod
    def cast_valence(cls, value) -> NDArray[np.float32]:
        return np.asarray(value, dtype=np.float32).reshape(-1)

    @model_validator(mode="after")
    def validate_trials(self):
        n_trials = self.trials.shape[0]
        if n_trials < 1:
            raise ValueError("An epoch set needs at least one trial.")
        if len(self.subject_ids) != n_trials or len(self.valence) != n_trials:
            raise ValueError(
                f"Expected {n_trials} subject ids and ratings, got "
                f"{len(self.subject_ids)} and {len(self.valence)}."
            )
        outside = np.flatnonzero(
            ~((self.valence >= VALENCE_MIN) & (self.valence <= VALENCE_MAX))
        )
        if outside.size:
            index = int(outside[0])
            raise ValueError(
                f"Valence rating {self.valence[index]} at trial {index} is outside "
                f"[{VALENCE_MIN:g}, {VALENCE_MAX:g}]."
            )
        return self

    @property
    def n_trials(self) -> int:
        return self.trials.shape[0]

    @property
    def n_channels(self) -> int:
        return self.trials.shape[1]

    @property
    def n_samples(self) -> int:
        return self.trials.shape[2]

    @property
    def subjects(self) -> list[int]:
        """Distinct subject ids in ascending order."""
        return [int(s) for s in np.unique(self.subject_ids)]

    def select(self, indices) -> "EpochSet":
        """Return the trials at the given indices, in that order."""
        indices = np.asarray(indices, dtype=np.int64)
        return EpochSet(
            trials=self.trials[indices],
            subject_ids=self.subject_ids[indices],
            valence=self.valence[indices],
            sample_rate_hz=self.sample_rate_hz,
        )

    def with_trials(self, trials: NDArray[np.floating]) -> "EpochSet":
        """Return a copy carrying new trial data and the same metadata."""
        return EpochSet(
            trials=trials,
            subject_ids=self.subject_ids.copy(),
            valence=self.valence.copy(),
            sample_rate_hz=self.sample_rate_hz,
        )

    def equals(self, other: "EpochSet") -> bool:
        """Bit-exact equality of data and metadata."""
        return (
            self.trials.shape == other.trials.shape
            and self.trials.tobytes() == other.trials.tobytes()
            and self.subject_ids.tobytes() == other.subject_ids.tobytes()
            and self.valence.tobytes() == other.valence.tobytes()
            and np.float32(self.sample_rate_hz) == np.float32(other.sample_rate_hz)
        )


class LabeledEpochs(BaseModel):
    """Trials with their binary valence labels."""

    model_config: ConfigDict = ConfigDict(arbitrary_types_allowed=True)

    epochs: EpochSet = Field(description="The trials.")
    labels: np.ndarray = Field(description="0 = Low, 1 = High per trial.")

    @field_validator("labels", mode="before")
    @classmethod
    def cast_labels(cls, value) -> NDArray[np.int64]:
        return np.asarray(value, dtype=np.int64).reshape(-1)

    @model_validator(mode="after")
    def validate_labels(self):
        if len(self.labels) != self.epochs.n_trials:
            raise ValueError(
                f"Expected {self.epochs.n_trials} labels, got {len(self.labels)}."
            )
        if not np.isin(self.labels, [ValenceClass.LOW, ValenceClass.HIGH]).all():
            raise ValueError("Labels must be 0 (Low) or 1 (High).")
        return self

    @property
    def subjects(self) -> set[int]:
        return set(self.epochs.subjects)


class LabeledSplit(BaseModel):
    """Subject-disjoint train, validation and test partitions."""

    train: LabeledEpochs
    val: LabeledEpochs
    test: LabeledEpochs

    @model_validator(mode="after")
    def validate_disjoint(self):
        pairs = {
            "train/val": self.train.subjects & self.val.subjects,
            "train/test": self.train.subjects & self.test.subjects,
            "val/test": self.val.subjects & self.test.subjects,
        }
        for name, shared in pairs.items():
            if shared:
                raise ValueError(f"Subjects {sorted(shared)} appear in both {name}.")
        return self
