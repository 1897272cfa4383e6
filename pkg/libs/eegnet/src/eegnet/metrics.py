"""
Binary classification metrics with High (label 1) as the positive class.
"""

import json
import logging
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, Field
from sklearn.metrics import accuracy_score, confusion_matrix, f1_score

logger = logging.getLogger(__name__)

LABELS = (0, 1)


class MetricsReport(BaseModel):
    accuracy: float = Field(ge=0.0, le=1.0)
    f1: float = Field(ge=0.0, le=1.0, description="F1 of the High class; 0 when undefined")
    confusion: list[list[int]] = Field(description="2x2 counts indexed [actual][predicted]")
    n: int = Field(ge=1)

    @property
    def precision(self) -> float:
        tp, fp = self.confusion[1][1], self.confusion[0][1]
        return tp / (tp + fp) if tp + fp else 0.0

    @property
    def recall(self) -> float:
        tp, fn = self.confusion[1][1], self.confusion[1][0]
        return tp / (tp + fn) if tp + fn else 0.0

    def to_json(self) -> str:
        """UTF-8 JSON with keys accuracy, f1, confusion and n."""
        return json.dumps(self.model_dump(), indent=2, sort_keys=False)


def _as_labels(values: Sequence[int] | np.ndarray, name: str) -> np.ndarray:
    array = np.asarray(values)
    bad = np.flatnonzero(~np.isin(array, LABELS))
    if bad.size:
        msg = f"{name} label {array[bad[0]]} at index {int(bad[0])} is not 0 or 1"
        logger.error(msg)
        raise ValueError(msg)
    return array.astype(np.int64)


def compute_metrics(
    predicted: Sequence[int] | np.ndarray, actual: Sequence[int] | np.ndarray
) -> MetricsReport:
    """
    Accuracy, positive-class F1 and the confusion matrix.

    Raises:
        ValueError: If the lists are empty, differ in length or hold labels
            other than 0 and 1
    """
    if len(predicted) != len(actual) or len(actual) == 0:
        msg = (
            f"Need equal, non-zero numbers of predicted and actual labels, "
            f"got {len(predicted)} and {len(actual)}"
        )
        logger.error(msg)
        raise ValueError(msg)
    y_pred = _as_labels(predicted, "Predicted")
    y_true = _as_labels(actual, "Actual")

    return MetricsReport(
        accuracy=float(accuracy_score(y_true, y_pred)),
        f1=float(f1_score(y_true, y_pred, pos_label=1, zero_division=0)),
        confusion=confusion_matrix(y_true, y_pred, labels=list(LABELS)).tolist(),
        n=len(y_true),
    )
