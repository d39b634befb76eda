# equivarifier/mnist/dataset.py
import logging
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..actions.builtin import rot90_action
from ..errors import ConfigError, LabelError
from ..groups.core import cyclic_group
from .idx import MnistSamples
from .labels import NUM_ANGLES, encode_label, encode_labels

logger = logging.getLogger(__name__)

ROTATION_POLICIES = ("none", "random")


@dataclass(frozen=True)
class LabeledSample:
    image: np.ndarray  # 28×28×1 in [0, 1]
    digit: int
    angle_index: int  # k: rotated by 90k degrees counterclockwise

    @property
    def joint_label(self) -> np.ndarray:
        return encode_label(self.digit, self.angle_index)


@dataclass(frozen=True)
class LabeledDataset:
    """Rotated images with digits, angle indices and R^40 targets."""

    images: np.ndarray
    digits: np.ndarray
    angles: np.ndarray
    seed: int
    policy: str

    def __len__(self) -> int:
        return int(self.digits.shape[0])

    def __getitem__(self, i: int) -> LabeledSample:
        return LabeledSample(self.images[i], int(self.digits[i]), int(self.angles[i]))

    def __iter__(self) -> Iterator[LabeledSample]:
        for i in range(len(self)):
            yield self[i]

    def targets(self, dtype=np.float64) -> np.ndarray:
        return encode_labels(self.digits, self.angles, dtype=dtype)

    def head(self, count: int) -> "LabeledDataset":
        return LabeledDataset(self.images[:count], self.digits[:count], self.angles[:count], self.seed, self.policy)


def rotate_images(images: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Rotate image i by 90·angles[i] degrees counterclockwise (exact pixel permutation)."""
    if images.shape[0] != angles.shape[0]:
        raise LabelError(f"{images.shape[0]} images but {angles.shape[0]} angles")
    _, h, w, c = images.shape
    action = rot90_action(cyclic_group(NUM_ANGLES), h, w, c)
    rotated = np.empty_like(images)
    for k in range(NUM_ANGLES):
        mask = angles == k
        if mask.any():
            rotated[mask] = action.apply(k, images[mask])
    return rotated


def prepare_dataset(samples: MnistSamples, rotate: str = "none", seed: int = 0) -> LabeledDataset:
    """
    Attach angle labels. Policy "none" keeps every image upright (angle 0);
    "random" draws each angle uniformly from a generator seeded with `seed`.
    """
    n = len(samples)
    if rotate == "none":
        angles = np.zeros(n, dtype=np.int64)
    elif rotate == "random":
        angles = np.random.default_rng(seed).integers(0, NUM_ANGLES, size=n)
    else:
        raise ConfigError(f"Unknown rotation policy {rotate!r}; expected one of {ROTATION_POLICIES}")
    images = rotate_images(samples.images, angles) if rotate != "none" else samples.images
    counts = np.bincount(angles, minlength=NUM_ANGLES).tolist()
    logger.info(f"Prepared {n} samples (rotate={rotate}, seed={seed}, angle counts={counts})")
    return LabeledDataset(images, np.asarray(samples.digits, dtype=np.int64), angles, seed, rotate)


def synthetic_images(count: int, seed: int = 0, size: int = 28) -> np.ndarray:
    """Seeded random images in [0, 1] for runs without MNIST on disk."""
    rng = np.random.default_rng(seed)
    return rng.random((count, size, size, 1)).astype(np.float32)
