"""
Epoch loop with early stopping on validation loss.
"""

import logging
import math
from collections.abc import Callable
from pathlib import Path

import numpy as np
import polars as pl
from data.models.epochs import LabeledEpochs
from numerics import Rng
from pydantic import BaseModel, Field

from eegnet.layers import Mode, NonFiniteError, softmax_xent
from eegnet.models import (
    ModelParams,
    apply_maxnorm,
    backward,
    forward,
    load_checkpoint,
    save_checkpoint,
)
from eegnet.training.adam import AdamState, adam_step
from eegnet.training.config import TrainConfig

logger = logging.getLogger(__name__)

MIN_BATCH = 2

ValLossFn = Callable[[ModelParams], float]


class FitReport(BaseModel):
    """Loss traces and early-stopping outcome of one ``fit`` call."""

    train_losses: list[float] = Field(default_factory=list)
    val_losses: list[float] = Field(default_factory=list)
    stopped_epoch: int = 0
    best_epoch: int = Field(default=0, description="1-based; 0 if no epoch improved")
    best_val_loss: float = math.inf
    restored: bool = False


def _inputs(labeled: LabeledEpochs) -> np.ndarray:
    return labeled.epochs.trials[:, None, :, :]


def train_epoch(
    params: ModelParams,
    state: AdamState,
    train: LabeledEpochs,
    cfg: TrainConfig,
    rng: Rng,
) -> tuple[ModelParams, AdamState, float]:
    """
    One pass over the shuffled training split.

    Each batch runs a train-mode forward, softmax cross-entropy, the full
    backward pass, an Adam step and the max-norm projection. A final partial
    batch is kept only when it holds at least 2 trials.

    Returns:
        Updated params and optimizer state, and the trial-weighted mean loss
    """
    n = train.epochs.n_trials
    if n < MIN_BATCH:
        msg = f"Training needs at least {MIN_BATCH} trials, got {n}"
        logger.error(msg)
        raise ValueError(msg)

    x, labels = _inputs(train), train.labels
    order = rng.permutation(n)
    total, seen = 0.0, 0
    for start in range(0, n, cfg.batch_size):
        batch = order[start : start + cfg.batch_size]
        if len(batch) < MIN_BATCH:
            logger.debug(f"Dropping final batch of {len(batch)} trial")
            continue

        logits, trace = forward(params, x[batch], mode=Mode.TRAIN, rng=rng)
        loss, grad_logits, _ = softmax_xent(logits, labels[batch])
        if not math.isfinite(loss):
            msg = f"Training loss became {loss} at step {state.t + 1}"
            logger.error(msg)
            raise NonFiniteError(msg)

        grads = backward(params, trace, grad_logits)
        trainable, state = adam_step(
            params.trainable,
            grads,
            state,
            lr=cfg.learning_rate,
            beta1=cfg.beta1,
            beta2=cfg.beta2,
            eps=cfg.eps_adam,
        )
        params = apply_maxnorm(params.replace(trainable=trainable, buffers=trace.buffers))

        total += loss * len(batch)
        seen += len(batch)
        logger.debug(f"step {state.t}: batch loss {loss:.6f}")

    return params, state, total / seen


def evaluate_loss(params: ModelParams, labeled: LabeledEpochs, batch_size: int = 64) -> float:
    """Infer-mode mean cross-entropy over a labelled set, batches in index order."""
    x, labels = _inputs(labeled), labeled.labels
    total = 0.0
    for start in range(0, len(labels), batch_size):
        logits, _ = forward(params, x[start : start + batch_size], mode=Mode.INFER)
        loss, _, _ = softmax_xent(logits, labels[start : start + batch_size])
        total += loss * len(logits)
    return total / len(labels)


def _write_log(path: Path, report: FitReport) -> None:
    pl.DataFrame(
        {
            "epoch": list(range(1, len(report.train_losses) + 1)),
            "train_loss": report.train_losses,
            "val_loss": report.val_losses,
        }
    ).write_csv(path)


def fit(
    params: ModelParams,
    train: LabeledEpochs,
    val: LabeledEpochs,
    cfg: TrainConfig,
    val_loss_fn: ValLossFn | None = None,
) -> tuple[ModelParams, FitReport]:
    """
    Train until validation loss stops improving, then restore the best epoch.

    An epoch improves when its validation loss is strictly below the best so
    far; it is then checkpointed and the patience counter resets. Training
    stops when the counter reaches ``cfg.patience`` or at ``cfg.max_epochs``.

    Args:
        params: Initial parameters
        train: Training split
        val: Validation split, subject-disjoint from ``train``
        cfg: Optimizer and stopping settings
        val_loss_fn: Replaces the infer-mode validation loss

    Returns:
        Parameters reloaded from the best checkpoint and the FitReport

    Raises:
        OSError: If the checkpoint path cannot be written, before any training
    """
    checkpoint = Path(cfg.checkpoint_path)
    try:
        save_checkpoint(params, checkpoint)
    except OSError as e:
        msg = f"Cannot write checkpoint {checkpoint}: {e}"
        logger.error(msg)
        raise OSError(msg) from e

    evaluate = val_loss_fn or (lambda p: evaluate_loss(p, val, cfg.batch_size))
    rng = Rng(cfg.seed)
    state = AdamState.fresh(params.trainable)
    report = FitReport()
    waited = 0

    for epoch in range(1, cfg.max_epochs + 1):
        params, state, train_loss = train_epoch(params, state, train, cfg, rng)
        val_loss = float(evaluate(params))
        report.train_losses.append(train_loss)
        report.val_losses.append(val_loss)
        report.stopped_epoch = epoch

        if val_loss < report.best_val_loss:
            report.best_val_loss = val_loss
            report.best_epoch = epoch
            waited = 0
            save_checkpoint(params, checkpoint)
        else:
            waited += 1

        if cfg.log_path is not None:
            _write_log(Path(cfg.log_path), report)
        logger.info(
            f"epoch {epoch}: train loss {train_loss:.4f}, val loss {val_loss:.4f} "
            f"(best {report.best_val_loss:.4f} at epoch {report.best_epoch})"
        )

        if waited >= cfg.patience:
            logger.info(f"Early stopping after epoch {epoch}: no improvement for {waited} epochs")
            break

    restored = load_checkpoint(checkpoint)
    report.restored = report.best_epoch > 0
    return restored, report
