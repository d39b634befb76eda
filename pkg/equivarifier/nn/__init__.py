# equivarifier/nn/__init__.py
from .functional import (
    concat_channels,
    conv2d_forward,
    dense_forward,
    maxpool_forward,
    sgd_step,
    softmax,
    softmax_cross_entropy,
    split_channels,
)
from .layers import (
    BlockPrecompose,
    BlockProjection,
    Conv2D,
    Dense,
    Flatten,
    Layer,
    LiftedLayer,
    MaxPool2D,
    ReLU,
    Sequential,
    Softmax,
)
from .model import Model, backward, sequential_model
from .gradcheck import GradCheckReport, grad_check
from .checkpoint import load_checkpoint, read_checkpoint, save_checkpoint

__all__ = [
    "BlockPrecompose",
    "BlockProjection",
    "Conv2D",
    "Dense",
    "Flatten",
    "GradCheckReport",
    "Layer",
    "LiftedLayer",
    "MaxPool2D",
    "Model",
    "ReLU",
    "Sequential",
    "Softmax",
    "backward",
    "concat_channels",
    "conv2d_forward",
    "dense_forward",
    "grad_check",
    "load_checkpoint",
    "maxpool_forward",
    "read_checkpoint",
    "save_checkpoint",
    "sequential_model",
    "sgd_step",
    "softmax",
    "softmax_cross_entropy",
    "split_channels",
]
