"""Rotated-MNIST experiment: data, labels, the equivariant network, training and evaluation."""

from .dataset import LabeledDataset, LabeledSample, prepare_dataset, rotate_images, synthetic_images
from .evaluation import EvalReport, PolicyComparison, compare_training_policies, evaluate, predict_logits
from .idx import MnistSamples, load_idx, load_split, locate_split, read_idx_array, write_idx
from .labels import (
    NUM_ANGLES,
    NUM_CLASSES,
    NUM_DIGITS,
    decode_label,
    digit_marginal,
    encode_label,
    encode_labels,
    probabilities,
)
from .network import ModelConfig, build_model, build_reference_model, equivarify_reference, parameter_counts
from .training import TrainResult, train
from .verification import EquivarianceTable, RotationRow, verify_equivariance_report

__all__ = [
    "LabeledDataset",
    "LabeledSample",
    "prepare_dataset",
    "rotate_images",
    "synthetic_images",
    "EvalReport",
    "PolicyComparison",
    "compare_training_policies",
    "evaluate",
    "predict_logits",
    "MnistSamples",
    "load_idx",
    "load_split",
    "locate_split",
    "read_idx_array",
    "write_idx",
    "NUM_ANGLES",
    "NUM_CLASSES",
    "NUM_DIGITS",
    "decode_label",
    "digit_marginal",
    "encode_label",
    "encode_labels",
    "probabilities",
    "ModelConfig",
    "build_model",
    "build_reference_model",
    "equivarify_reference",
    "parameter_counts",
    "TrainResult",
    "train",
    "EquivarianceTable",
    "RotationRow",
    "verify_equivariance_report",
]
