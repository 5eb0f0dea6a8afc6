"""Supervised language and script identification."""

from .features import char_ngrams, featurize, fnv1a_64
from .metrics import ClassScores, EvalReport, evaluate, evaluate_external, report_from_pairs
from .model import LabelScheme, LidHyperparams, LidModel, Prediction, aggregate_label, softmax
from .train import TrainResult, aggregate_dataset, loss_and_gradients, train

__all__ = [
    "char_ngrams", "featurize", "fnv1a_64",
    "ClassScores", "EvalReport", "evaluate", "evaluate_external", "report_from_pairs",
    "LabelScheme", "LidHyperparams", "LidModel", "Prediction", "aggregate_label", "softmax",
    "TrainResult", "aggregate_dataset", "loss_and_gradients", "train",
]
