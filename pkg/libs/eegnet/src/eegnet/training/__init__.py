from eegnet.training.adam import AdamState, adam_step
from eegnet.training.config import TrainConfig
from eegnet.training.loop import FitReport, evaluate_loss, fit, train_epoch

__all__ = [
    "AdamState",
    "FitReport",
    "TrainConfig",
    "adam_step",
    "evaluate_loss",
    "fit",
    "train_epoch",
]
