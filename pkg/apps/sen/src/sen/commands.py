"""
Subcommand implementations. Each returns a process exit code.
"""

import argparse
import logging
from pathlib import Path

import numpy as np
from data import (
    BandpowerThresholdClassifier,
    EpochSet,
    bandpass_filter,
    binarize_valence,
    generate_synthetic,
    load_epochset,
    save_epochset,
    split_subject_independent,
    standardize,
)
from eegnet.layers import GRADCHECK_TOLERANCE, run_gradcheck_suite
from eegnet.metrics import MetricsReport, compute_metrics
from eegnet.models import build_model, load_checkpoint, predict_batches
from eegnet.training import fit
from numerics import Rng
from pydantic import ValidationError

from sen.config import (
    BASELINE_NAME,
    MANIFEST_NAME,
    METRICS_NAME,
    RunConfig,
    UsageError,
    manifest_path,
)

logger = logging.getLogger(__name__)

# keys of the streams spawned from the run seed
SPLIT_STREAM = 0
INIT_STREAM = 1
TRAIN_STREAM = 2


def _require(value: Path | None, flag: str) -> Path:
    if value is None:
        raise UsageError(f"{flag} is required")
    return Path(value)


def _preprocess(epochs: EpochSet, run: RunConfig) -> EpochSet:
    if run.bandpass is not None:
        epochs = bandpass_filter(epochs, *run.bandpass)
    return standardize(epochs)


def _subjects_subset(epochs: EpochSet, subjects: set[int]) -> EpochSet:
    return epochs.select(np.flatnonzero(np.isin(epochs.subject_ids, sorted(subjects))))


def _write_report(report: MetricsReport, path: Path) -> None:
    path.write_text(report.to_json() + "\n", encoding="utf-8")
    logger.info(f"Wrote {path}")


def _write_manifest(run: RunConfig, path: Path) -> None:
    path.write_text(run.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote {path}")


def run_synth(args: argparse.Namespace, run: RunConfig) -> int:
    """Generate a synthetic epoch file."""
    out = _require(run.out, "--out")
    epochs = generate_synthetic(
        n_subjects=run.synth_subjects,
        trials_per_subject=run.synth_trials_per_subject,
        n_channels=run.synth_channels,
        n_samples=run.synth_samples,
        sample_rate_hz=run.synth_sample_rate_hz,
        seed=run.seed,
    )
    out.parent.mkdir(parents=True, exist_ok=True)
    save_epochset(epochs, out, manifest=True)
    _write_manifest(run, manifest_path(out))
    return 0


def run_train(args: argparse.Namespace, run: RunConfig) -> int:
    """
    Load, binarize, split by subject, standardize, fit, then score the test
    subjects with the restored model and with the bandpower baseline.
    """
    data_path = _require(run.data, "--data")
    run_dir = _require(run.out, "--out")
    root = Rng(run.seed)

    raw = load_epochset(data_path)
    if run.bandpass is not None:
        raw = bandpass_filter(raw, *run.bandpass)
    split = split_subject_independent(
        standardize(raw), run.test_fraction, run.val_fraction, root.spawn(SPLIT_STREAM)
    )
    try:
        arch = run.arch_config(raw.n_channels, raw.n_samples)
        train_cfg = run.train_config(run_dir, root.spawn(TRAIN_STREAM).seed)
    except ValidationError as e:
        raise UsageError(f"Invalid run configuration: {e}") from e

    run_dir.mkdir(parents=True, exist_ok=True)
    _write_manifest(run, run_dir / MANIFEST_NAME)
    logger.info(
        f"Training on {len(split.train.subjects)} subjects, validating on "
        f"{len(split.val.subjects)}, testing on {len(split.test.subjects)}"
    )

    params = build_model(arch, root.spawn(INIT_STREAM))
    params, report = fit(params, split.train, split.val, train_cfg)
    logger.info(
        f"Stopped after epoch {report.stopped_epoch}; best validation loss "
        f"{report.best_val_loss:.4f} at epoch {report.best_epoch}"
    )

    predicted = predict_batches(params, split.test.epochs.trials[:, None])
    metrics = compute_metrics(predicted, split.test.labels)
    _write_report(metrics, run_dir / METRICS_NAME)

    baseline_train = _subjects_subset(raw, split.train.subjects | split.val.subjects)
    baseline_test = _subjects_subset(raw, split.test.subjects)
    classifier = BandpowerThresholdClassifier().fit(
        baseline_train, binarize_valence(baseline_train.valence)
    )
    baseline = compute_metrics(
        classifier.predict(baseline_test), binarize_valence(baseline_test.valence)
    )
    _write_report(baseline, run_dir / BASELINE_NAME)

    logger.info(
        f"Test accuracy {metrics.accuracy:.4f}, F1 {metrics.f1:.4f} "
        f"(bandpower baseline accuracy {baseline.accuracy:.4f})"
    )
    return 0


def run_eval(args: argparse.Namespace, run: RunConfig) -> int:
    """Score a checkpoint on an epoch file and print the MetricsReport JSON."""
    data_path = _require(run.data, "--data")
    checkpoint = _require(run.checkpoint, "--checkpoint")

    params = load_checkpoint(checkpoint)
    epochs = _preprocess(load_epochset(data_path), run)
    labels = binarize_valence(epochs.valence)
    if run.test_only:
        split = split_subject_independent(
            epochs, run.test_fraction, run.val_fraction, Rng(run.seed).spawn(SPLIT_STREAM)
        )
        epochs, labels = split.test.epochs, split.test.labels

    metrics = compute_metrics(predict_batches(params, epochs.trials[:, None]), labels)
    print(metrics.to_json())
    if run.out is not None:
        out = Path(run.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        _write_report(metrics, out)
        _write_manifest(run, manifest_path(out))
    else:
        logger.info(f"Resolved run configuration: {run.model_dump_json()}")
    return 0


def run_gradcheck(args: argparse.Namespace, run: RunConfig) -> int:
    """Print the worst relative error of every layer; exit 2 if any fails."""
    results = run_gradcheck_suite(Rng(run.seed))
    width = max(len(r.layer) for r in results)
    for result in results:
        status = "ok" if result.passed else "FAIL"
        print(f"{result.layer:<{width}}  {result.max_rel_error:.3e}  {status}")

    failed = [r.layer for r in results if not r.passed]
    if failed:
        logger.error(f"Gradient check above {GRADCHECK_TOLERANCE:g} for: {', '.join(failed)}")
        return 2
    return 0
