# equivarifier/mnist/training.py
"""
Minibatch SGD on the 40-class cross-entropy.

All randomness (the per-epoch shuffles) comes from one generator seeded with
`seed`, so a run is reproducible bit for bit in single-threaded mode.
"""

import logging
import math
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from pydantic import BaseModel

from ..errors import TrainingError
from ..nn.checkpoint import save_checkpoint
from ..nn.model import Model
from .dataset import LabeledDataset

logger = logging.getLogger(__name__)

# Loss before and after training is measured on this many leading samples.
PROBE_SAMPLES = 512


class TrainResult(BaseModel):
    seed: int
    epochs: int
    learning_rate: float
    batch_size: int
    samples: int
    initial_loss: float
    final_loss: float
    epoch_losses: List[float] = []
    batch_losses: List[float] = []
    checkpoints: List[str] = []


def _probe_loss(model: Model, dataset: LabeledDataset, targets: np.ndarray) -> float:
    n = min(len(dataset), PROBE_SAMPLES)
    return model.loss_and_gradients(dataset.images[:n], targets[:n])[0]


def train(
    model: Model,
    dataset: LabeledDataset,
    learning_rate: float = 0.05,
    batch_size: int = 32,
    epochs: int = 5,
    seed: int = 0,
    checkpoint_dir: Optional[Union[str, Path]] = None,
) -> TrainResult:
    """
    Train in place. With checkpoint_dir set, epoch_000.ckpt (the starting
    point) and one checkpoint per finished epoch are written there. A NaN or
    infinite loss stops training with TrainingError pointing at the last
    checkpoint written.
    """
    if len(dataset) == 0:
        raise TrainingError("Cannot train on an empty dataset")
    rng = np.random.default_rng(seed)
    targets = dataset.targets(dtype=model.dtype)
    checkpoint_dir = Path(checkpoint_dir) if checkpoint_dir is not None else None
    last_checkpoint: Optional[Path] = None

    def checkpoint(epoch: int) -> Optional[Path]:
        if checkpoint_dir is None:
            return None
        return save_checkpoint(model, checkpoint_dir / f"epoch_{epoch:03d}.ckpt", seed)

    result = TrainResult(
        seed=seed,
        epochs=epochs,
        learning_rate=learning_rate,
        batch_size=batch_size,
        samples=len(dataset),
        initial_loss=_probe_loss(model, dataset, targets),
        final_loss=math.nan,
    )
    last_checkpoint = checkpoint(0)
    if last_checkpoint is not None:
        result.checkpoints.append(str(last_checkpoint))

    logger.info(f"🚀 Training on {len(dataset)} samples: {epochs} epochs, lr={learning_rate}, batch={batch_size}, seed={seed}")
    for epoch in range(1, epochs + 1):
        order = rng.permutation(len(dataset))
        losses = []
        for start in range(0, len(order), batch_size):
            idx = order[start:start + batch_size]
            loss, grads = model.loss_and_gradients(dataset.images[idx], targets[idx])
            if not math.isfinite(loss):
                logger.error(f"❌ Loss became {loss} in epoch {epoch}; last good checkpoint: {last_checkpoint}")
                raise TrainingError(f"Training diverged in epoch {epoch} (loss {loss})", last_checkpoint)
            model.sgd_step(grads, learning_rate)
            losses.append(loss)
        mean_loss = float(np.mean(losses))
        result.epoch_losses.append(mean_loss)
        result.batch_losses.extend(losses)
        saved = checkpoint(epoch)
        if saved is not None:
            last_checkpoint = saved
            result.checkpoints.append(str(saved))
        logger.info(f"Epoch {epoch}/{epochs}: mean loss {mean_loss:.4f}")

    result.final_loss = _probe_loss(model, dataset, targets)
    return result
