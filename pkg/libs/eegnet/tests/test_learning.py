"""
End-to-end learning on synthetic subjects the model never saw.
"""

from pathlib import Path

import pytest
from data.spectral import BandpowerThresholdClassifier
from data.split import split_subject_independent
from data.synthetic import generate_synthetic
from data.transforms import standardize
from eegnet.metrics import compute_metrics
from eegnet.models import ArchConfig, build_model, predict_batches
from eegnet.training import TrainConfig, fit
from numerics import Rng


@pytest.mark.slow
class TestSubjectIndependentLearning:
    """20 subjects x 12 trials: 14 train, 2 validation and 4 test subjects."""

    @pytest.fixture(scope="class")
    def split(self):
        raw = generate_synthetic(20, 12, 16, 250, 125.0, seed=2024)
        return raw, split_subject_independent(standardize(raw), 0.2, 0.125, Rng(2024).spawn(0))

    def test_beats_thresholds_on_held_out_subjects(self, split, tmp_path: Path):
        _, parts = split
        arch = ArchConfig(n_channels=16, n_samples=250)
        cfg = TrainConfig(max_epochs=100, patience=20, seed=2024, checkpoint_path=tmp_path / "best.sten")

        params, report = fit(build_model(arch, Rng(2024).spawn(1)), parts.train, parts.val, cfg)
        predicted = predict_batches(params, parts.test.epochs.trials[:, None])
        metrics = compute_metrics(predicted, parts.test.labels)

        assert report.restored
        assert len(parts.test.subjects) == 4
        assert metrics.accuracy >= 0.85
        assert metrics.f1 >= 0.85

    def test_bandpower_baseline(self, split):
        """The alpha-band threshold reaches 80% on the same held-out subjects."""
        raw, parts = split
        train_ids = parts.train.subjects | parts.val.subjects
        train = raw.select([i for i, s in enumerate(raw.subject_ids.tolist()) if s in train_ids])
        test = raw.select([i for i, s in enumerate(raw.subject_ids.tolist()) if s in parts.test.subjects])

        classifier = BandpowerThresholdClassifier().fit(train, (train.valence >= 5.0).astype(int))
        accuracy = (classifier.predict(test) == (test.valence >= 5.0)).mean()

        assert accuracy >= 0.8
