# equivarifier/nn/gradcheck.py
"""
Central finite-difference gradient check.

Sampled parameters are nudged by ±epsilon and the loss difference is
compared with the analytic gradient. A sample whose relu masks or pooling
winners change between the two nudges sits on a kink; it is discarded and
another parameter is drawn.
"""

import logging
from typing import List, Optional

import numpy as np
from pydantic import BaseModel

from ..errors import ParameterError
from . import functional as F
from .model import Model

logger = logging.getLogger(__name__)

RELATIVE_FLOOR = 1e-3


class GradCheckReport(BaseModel):
    max_relative_error: float
    checked: int
    skipped_kinks: int
    total_parameters: int
    worst_parameter: Optional[str] = None
    epsilon: float
    seed: int

    def passed(self, tolerance: float = 1e-5) -> bool:
        return self.checked > 0 and self.max_relative_error < tolerance


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), RELATIVE_FLOOR)


def _same_pattern(a: List[np.ndarray], b: List[np.ndarray]) -> bool:
    return len(a) == len(b) and all(np.array_equal(u, v) for u, v in zip(a, b))


def grad_check(
    model: Model,
    x: np.ndarray,
    target: np.ndarray,
    epsilon: float = 1e-6,
    samples: int = 200,
    seed: int = 0,
) -> GradCheckReport:
    """
    Compare analytic and central-difference gradients on up to `samples`
    parameters (all of them when the model is smaller). The model must be
    in double precision.
    """
    if model.dtype != np.float64:
        raise ParameterError(f"grad_check needs float64 parameters, model is {model.dtype}")
    x = np.asarray(x, dtype=np.float64)

    t = np.asarray(target)

    def evaluate():
        logits, cache = model.forward(x)
        loss = F.softmax_cross_entropy(logits, t if t.ndim == logits.ndim else t[None])[0]
        return loss, model.network.activation_pattern(cache)

    _, analytic = model.loss_and_gradients(x, target)
    params = model.parameters()
    keys = list(params)
    sizes = np.array([params[k].size for k in keys])
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offsets[-1])

    rng = np.random.default_rng(seed)
    order = rng.permutation(total)

    worst, worst_name = 0.0, None
    checked = skipped = 0
    for flat in order:
        if checked >= samples:
            break
        slot = int(np.searchsorted(offsets, flat, side="right") - 1)
        key = keys[slot]
        index = int(flat - offsets[slot])
        p = params[key].reshape(-1)
        original = p[index]

        p[index] = original + epsilon
        loss_plus, plus_pattern = evaluate()
        p[index] = original - epsilon
        loss_minus, minus_pattern = evaluate()
        p[index] = original

        if not _same_pattern(plus_pattern, minus_pattern):
            skipped += 1
            continue
        numeric = (loss_plus - loss_minus) / (2 * epsilon)
        err = relative_error(float(analytic[key].reshape(-1)[index]), numeric)
        checked += 1
        if err > worst:
            worst, worst_name = err, f"{key}[{index}]"

    report = GradCheckReport(
        max_relative_error=worst,
        checked=checked,
        skipped_kinks=skipped,
        total_parameters=total,
        worst_parameter=worst_name,
        epsilon=epsilon,
        seed=seed,
    )
    logger.info(f"✅ grad_check: {checked} parameters, max relative error {worst:.3e} ({skipped} kinks skipped)")
    return report
