"""
Unit tests for the binary epoch file format.
"""

import json
from pathlib import Path

import numpy as np
import pytest
from data.errors import BadMagicError, TruncatedPayloadError, VersionMismatchError
from data.loader import load_epochset, manifest_path, save_epochset
from data.models.epochs import EpochSet
from numerics import Rng


class TestEpochFile:
    """Test cases for save_epochset / load_epochset."""

    @pytest.fixture
    def sample_epochs(self) -> EpochSet:
        """Three trials from two subjects with irregular values."""
        rng = Rng(8)
        return EpochSet(
            trials=rng.normal([3, 4, 25], std=30.0),
            subject_ids=[7, 7, 12],
            valence=[1.0, 5.0, 8.6],
            sample_rate_hz=125.0,
        )

    @pytest.fixture
    def saved_path(self, sample_epochs: EpochSet, tmp_path: Path) -> Path:
        return save_epochset(sample_epochs, tmp_path / "sample.eege")

    def test_round_trip_is_bit_exact(self, sample_epochs: EpochSet, saved_path: Path):
        """Loading a saved set restores every bit."""
        loaded = load_epochset(saved_path)

        assert loaded.equals(sample_epochs)
        assert loaded.trials.dtype == np.float32
        assert loaded.sample_rate_hz == 125.0

    def test_file_size(self, saved_path: Path):
        """Header plus one record per trial."""
        assert saved_path.stat().st_size == 24 + 3 * (8 + 4 * 4 * 25)

    def test_bad_magic(self, saved_path: Path):
        """A corrupted magic is reported as such."""
        buffer = bytearray(saved_path.read_bytes())
        buffer[:4] = b"XXXX"
        saved_path.write_bytes(bytes(buffer))

        with pytest.raises(BadMagicError, match="Bad magic"):
            load_epochset(saved_path)

    def test_version_mismatch(self, saved_path: Path):
        """An unknown version is reported as such."""
        buffer = bytearray(saved_path.read_bytes())
        buffer[4:8] = (2).to_bytes(4, "little")
        saved_path.write_bytes(bytes(buffer))

        with pytest.raises(VersionMismatchError, match="version 2"):
            load_epochset(saved_path)

    def test_truncated_payload_names_trial(self, saved_path: Path):
        """Cutting into the last record names that trial."""
        buffer = saved_path.read_bytes()
        saved_path.write_bytes(buffer[:-10])

        with pytest.raises(TruncatedPayloadError, match="truncated at trial 2"):
            load_epochset(saved_path)

    def test_errors_are_distinct(self):
        """The three format errors are separate classes."""
        assert len({BadMagicError, VersionMismatchError, TruncatedPayloadError}) == 3
        assert not issubclass(TruncatedPayloadError, BadMagicError)

    def test_missing_file(self, tmp_path: Path):
        with pytest.raises(FileNotFoundError):
            load_epochset(tmp_path / "absent.eege")

    def test_manifest_sidecar(self, sample_epochs: EpochSet, tmp_path: Path):
        """The sidecar lists trial index, subject id and valence per line."""
        path = save_epochset(sample_epochs, tmp_path / "with_manifest.eege", manifest=True)

        lines = manifest_path(path).read_text(encoding="utf-8").splitlines()
        records = [json.loads(line) for line in lines]

        assert [r["trial"] for r in records] == [0, 1, 2]
        assert [r["subject_id"] for r in records] == [7, 7, 12]
        assert records[2]["valence"] == pytest.approx(8.6, abs=1e-5)

    def test_dens_geometry(self, tmp_path: Path):
        """A 128-channel, 875-sample file loads into the expected geometry."""
        epochs = EpochSet(
            trials=np.zeros((2, 128, 875), dtype=np.float32),
            subject_ids=[1, 2],
            valence=[4.0, 6.0],
            sample_rate_hz=125.0,
        )
        loaded = load_epochset(save_epochset(epochs, tmp_path / "recordings.eege"))

        assert (loaded.n_trials, loaded.n_channels, loaded.n_samples) == (2, 128, 875)
