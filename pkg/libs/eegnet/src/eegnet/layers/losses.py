import logging

import numpy as np
from numerics import ShapeError, Tensor

logger = logging.getLogger(__name__)


def softmax_xent(logits: Tensor, labels: Tensor) -> tuple[float, Tensor, Tensor]:
    """
    Mean softmax cross-entropy of integer labels.

    Args:
        logits: [N, K]
        labels: [N] class indices in [0, K)

    Returns:
        (loss, d loss / d logits, probabilities). The gradient is
        (probs - one_hot) / N.
    """
    if logits.ndim != 2:
        msg = f"softmax_xent expects [N, K] logits, got shape {logits.shape}"
        logger.error(msg)
        raise ShapeError(msg)
    n, k = logits.shape
    labels = np.asarray(labels)
    if labels.shape != (n,):
        msg = f"softmax_xent expects {n} labels, got shape {labels.shape}"
        logger.error(msg)
        raise ShapeError(msg)
    bad = np.flatnonzero((labels < 0) | (labels >= k))
    if bad.size:
        row = int(bad[0])
        msg = f"Label {labels[row]} at row {row} is outside [0, {k})"
        logger.error(msg)
        raise ValueError(msg)

    # shift by the row maximum so exp never overflows
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    sums = exp.sum(axis=1, keepdims=True)
    probs = exp / sums
    log_probs = shifted - np.log(sums)
    rows = np.arange(n)
    loss = float(-log_probs[rows, labels].mean())

    grad = probs.copy()
    grad[rows, labels] -= 1
    grad /= n
    return loss, grad, probs
