# equivarifier/mnist/evaluation.py
"""
Joint (digit, angle) evaluation.

A prediction is the argmax over all 40 logits; it is correct when both the
digit (index mod 10) and the angle (index div 10) match.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel

from ..nn.model import Model
from .dataset import LabeledDataset, prepare_dataset
from .labels import NUM_ANGLES, NUM_CLASSES, NUM_DIGITS, digit_marginal, probabilities
from .training import train

logger = logging.getLogger(__name__)


class EvalReport(BaseModel):
    joint_accuracy: float
    digit_accuracy: float
    angle_accuracy: float
    marginal_digit_accuracy: float
    # digit -> 4×4 counts, rows true angle, columns predicted angle
    angle_confusion: Dict[int, List[List[int]]]
    seed: int
    count: int


def _chunks(n: int, batch_size: int) -> List[slice]:
    return [slice(i, min(i + batch_size, n)) for i in range(0, n, batch_size)]


def predict_logits(model: Model, images: np.ndarray, batch_size: int = 256, threads: int = 1) -> np.ndarray:
    """Logits for every image; batches may run on a pool, results stay in index order."""
    chunks = _chunks(len(images), batch_size)
    if threads <= 1 or len(chunks) <= 1:
        outputs = [model.predict(images[c]) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outputs = list(pool.map(lambda c: model.predict(images[c]), chunks))
    if not outputs:
        return np.zeros((0, NUM_CLASSES))
    return np.concatenate(outputs)


def summarize_predictions(logits: np.ndarray, digits: np.ndarray, angles: np.ndarray, seed: int = 0) -> EvalReport:
    n = int(len(digits))
    predicted = np.argmax(logits, axis=-1)
    pred_digit = predicted % NUM_DIGITS
    pred_angle = predicted // NUM_DIGITS
    marginal = np.argmax(digit_marginal(probabilities(logits)), axis=-1) if n else np.zeros(0, dtype=np.int64)

    confusion = {d: np.zeros((NUM_ANGLES, NUM_ANGLES), dtype=np.int64) for d in range(NUM_DIGITS)}
    for d, a, pa in zip(digits, angles, pred_angle):
        confusion[int(d)][int(a), int(pa)] += 1

    def fraction(mask: np.ndarray) -> float:
        return float(np.mean(mask)) if n else 0.0

    return EvalReport(
        joint_accuracy=fraction((pred_digit == digits) & (pred_angle == angles)),
        digit_accuracy=fraction(pred_digit == digits),
        angle_accuracy=fraction(pred_angle == angles),
        marginal_digit_accuracy=fraction(marginal == digits),
        angle_confusion={d: m.tolist() for d, m in confusion.items()},
        seed=seed,
        count=n,
    )


def evaluate(model: Model, dataset: LabeledDataset, batch_size: int = 256, threads: int = 1) -> EvalReport:
    logits = predict_logits(model, dataset.images, batch_size=batch_size, threads=threads)
    report = summarize_predictions(logits, dataset.digits, dataset.angles, seed=dataset.seed)
    logger.info(
        f"✅ Evaluated {report.count} samples: joint {report.joint_accuracy:.4f}, "
        f"digit {report.digit_accuracy:.4f}, angle {report.angle_accuracy:.4f}"
    )
    return report


class PolicyComparison(BaseModel):
    unrotated: EvalReport
    rotated: EvalReport

    @property
    def joint_gap(self) -> float:
        return abs(self.unrotated.joint_accuracy - self.rotated.joint_accuracy)


def compare_training_policies(
    build,
    train_samples,
    test_set: LabeledDataset,
    learning_rate: float,
    batch_size: int,
    epochs: int,
    seed: int = 0,
    threads: int = 1,
    checkpoint_dir: Optional[str] = None,
) -> PolicyComparison:
    """
    Train two fresh models from `build()` with the same seed, one on upright
    images and one on randomly rotated ones, and evaluate both on `test_set`.
    """
    reports = {}
    for policy in ("none", "random"):
        model = build()
        data = prepare_dataset(train_samples, rotate=policy, seed=seed)
        train(model, data, learning_rate, batch_size, epochs, seed, checkpoint_dir=None if checkpoint_dir is None else f"{checkpoint_dir}/{policy}")
        reports[policy] = evaluate(model, test_set, threads=threads)
    comparison = PolicyComparison(unrotated=reports["none"], rotated=reports["random"])
    logger.info(f"Training policy gap (joint accuracy): {comparison.joint_gap:.4f}")
    return comparison
