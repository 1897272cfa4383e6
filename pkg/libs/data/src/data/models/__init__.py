from data.models.epochs import EpochSet, LabeledEpochs, LabeledSplit, ValenceClass

__all__ = ["EpochSet", "LabeledEpochs", "LabeledSplit", "ValenceClass"]
