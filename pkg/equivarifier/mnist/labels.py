# equivarifier/mnist/labels.py
"""
Joint (digit, angle) labels in R^40.

Slot angle·10 + digit: four blocks of ten, one per rotation, so rotating an
image by 90° counterclockwise moves its label one block to the right, which
is exactly the block-shift action of the generator.
"""

from typing import Tuple

import numpy as np

from ..errors import LabelError
from ..nn.functional import softmax

NUM_DIGITS = 10
NUM_ANGLES = 4
NUM_CLASSES = NUM_DIGITS * NUM_ANGLES


def encode_label(digit: int, angle_index: int) -> np.ndarray:
    if not 0 <= int(digit) < NUM_DIGITS or int(digit) != digit:
        raise LabelError(f"Digit must be in 0..9, got {digit!r}")
    if not 0 <= int(angle_index) < NUM_ANGLES or int(angle_index) != angle_index:
        raise LabelError(f"Angle index must be in 0..3, got {angle_index!r}")
    label = np.zeros(NUM_CLASSES)
    label[int(angle_index) * NUM_DIGITS + int(digit)] = 1.0
    return label


def encode_labels(digits: np.ndarray, angles: np.ndarray, dtype=np.float64) -> np.ndarray:
    """Vectorised encode_label for whole datasets."""
    digits = np.asarray(digits, dtype=np.int64)
    angles = np.asarray(angles, dtype=np.int64)
    if digits.shape != angles.shape:
        raise LabelError(f"{digits.shape[0]} digits but {angles.shape[0]} angles")
    if digits.size and (digits.min() < 0 or digits.max() >= NUM_DIGITS or angles.min() < 0 or angles.max() >= NUM_ANGLES):
        raise LabelError("Digits must be in 0..9 and angles in 0..3")
    labels = np.zeros((digits.shape[0], NUM_CLASSES), dtype=dtype)
    labels[np.arange(digits.shape[0]), angles * NUM_DIGITS + digits] = 1
    return labels


def decode_label(index: int) -> Tuple[int, int]:
    """Class index → (digit, angle_index)."""
    if not 0 <= int(index) < NUM_CLASSES:
        raise LabelError(f"Class index must be in 0..39, got {index!r}")
    return int(index) % NUM_DIGITS, int(index) // NUM_DIGITS


def probabilities(logits: np.ndarray) -> np.ndarray:
    """Softmax over the 40 joint classes (permutation-exact normalisation)."""
    return softmax(np.asarray(logits, dtype=np.float64))


def digit_marginal(output: np.ndarray, from_logits: bool = False) -> np.ndarray:
    """
    Sum the four angle blocks of a probability vector: R^40 → R^10.

    The four summands are added in sorted order, so block-shifted inputs
    give bit-identical marginals. Pass from_logits=True for raw model
    outputs.
    """
    p = probabilities(output) if from_logits else np.asarray(output, dtype=np.float64)
    if p.shape[-1] != NUM_CLASSES:
        raise LabelError(f"Expected {NUM_CLASSES} joint classes, got {p.shape[-1]}")
    blocks = p.reshape(*p.shape[:-1], NUM_ANGLES, NUM_DIGITS)
    return np.sort(blocks, axis=-2).sum(axis=-2)
