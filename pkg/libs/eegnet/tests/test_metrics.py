"""
Unit tests for classification metrics.
"""

import json

import numpy as np
import pytest
from eegnet.metrics import MetricsReport, compute_metrics
from numerics import Rng


def _recount(predicted: np.ndarray, actual: np.ndarray) -> tuple[float, float, list[list[int]]]:
    confusion = [[0, 0], [0, 0]]
    for p, a in zip(predicted.tolist(), actual.tolist()):
        confusion[a][p] += 1
    tp, fp, fn = confusion[1][1], confusion[0][1], confusion[1][0]
    accuracy = (tp + confusion[0][0]) / len(actual)
    f1 = 0.0 if tp == 0 else 2 * tp / (2 * tp + fp + fn)
    return accuracy, f1, confusion


class TestComputeMetrics:
    """Test cases for compute_metrics."""

    def test_perfect_prediction(self):
        report = compute_metrics([0, 1, 1, 0], [0, 1, 1, 0])

        assert report.accuracy == 1.0
        assert report.f1 == 1.0
        assert report.confusion == [[2, 0], [0, 2]]

    def test_hand_counts(self):
        report = compute_metrics([1, 1, 0, 0], [1, 0, 0, 0])

        assert report.accuracy == 0.75
        assert report.precision == 0.5
        assert report.recall == 1.0
        assert report.f1 == pytest.approx(2 / 3)
        assert report.n == 4

    def test_degenerate_predictor(self):
        report = compute_metrics([0, 0, 0, 0, 0], [0, 1, 0, 1, 0])

        assert report.f1 == 0.0
        assert report.accuracy == 0.6

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="got 2 and 3"):
            compute_metrics([0, 1], [0, 1, 1])

    def test_empty(self):
        with pytest.raises(ValueError):
            compute_metrics([], [])

    def test_invalid_label(self):
        with pytest.raises(ValueError, match="label 2 at index 1"):
            compute_metrics([0, 2, 1], [0, 1, 1])

    def test_joint_permutation_invariance(self):
        rng = Rng(1)
        predicted, actual = (rng.random([30]) > 0.5).astype(int), (rng.random([30]) > 0.4).astype(int)
        order = rng.permutation(30)

        assert compute_metrics(predicted[order], actual[order]) == compute_metrics(predicted, actual)

    def test_swapping_classes_transposes_confusion(self):
        rng = Rng(2)
        predicted, actual = (rng.random([25]) > 0.5).astype(int), (rng.random([25]) > 0.5).astype(int)

        report = compute_metrics(predicted, actual)
        swapped = compute_metrics(1 - predicted, 1 - actual)

        assert swapped.accuracy == report.accuracy
        assert swapped.confusion == [row[::-1] for row in report.confusion[::-1]]

    def test_matches_brute_force_recount(self):
        rng = Rng(3)
        for _ in range(1000):
            n = int(rng.permutation(50)[0]) + 1
            predicted, actual = (rng.random([n]) > 0.5).astype(int), (rng.random([n]) > 0.5).astype(int)

            report = compute_metrics(predicted, actual)
            accuracy, f1, confusion = _recount(predicted, actual)

            assert report.confusion == confusion
            assert report.accuracy == pytest.approx(accuracy)
            assert report.f1 == pytest.approx(f1)
            assert sum(map(sum, report.confusion)) == n


class TestMetricsReport:
    """Test cases for MetricsReport serialization."""

    def test_json_keys(self):
        report = compute_metrics([1, 0, 1], [1, 1, 1])

        payload = json.loads(report.to_json())

        assert list(payload) == ["accuracy", "f1", "confusion", "n"]
        assert MetricsReport(**payload) == report
