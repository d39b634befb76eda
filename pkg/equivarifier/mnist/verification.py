# equivarifier/mnist/verification.py
"""
Spot check of rotation equivariance on real or synthetic images.

For every image x and rotation k the model output on rot(k, x) must equal
the block shift by k of the output on x, bit for bit. The rows of the report
carry what a reader needs to see it: predicted digit and angle for each
rotation and the full 40-vector of probabilities.
"""

import logging
from typing import List, Optional

import numpy as np
from pydantic import BaseModel

from ..actions.base import GroupAction
from ..actions.builtin import block_shift_action, rot90_action
from ..errors import ShapeError
from ..groups.core import cyclic_group
from ..nn.model import Model
from ..utils.compare import bit_equal, max_abs_deviation
from .labels import NUM_ANGLES, NUM_CLASSES, decode_label, digit_marginal, probabilities

logger = logging.getLogger(__name__)


class RotationRow(BaseModel):
    image: int
    rotation: int
    predicted_digit: int
    predicted_angle: int
    probabilities: List[float]
    shift_exact: bool
    deviation: float


class EquivarianceTable(BaseModel):
    rows: List[RotationRow]
    images: int
    exact_matches: int
    checks: int
    max_deviation: float
    max_marginal_deviation: float
    digit_argmax_agrees: bool

    @property
    def passed(self) -> bool:
        return self.exact_matches == self.checks and self.digit_argmax_agrees

    @property
    def violations(self) -> List[RotationRow]:
        return [row for row in self.rows if not row.shift_exact]


def _default_actions(model: Model):
    s = model.input_shape[0]
    G = cyclic_group(NUM_ANGLES)
    return rot90_action(G, s, s, model.input_shape[-1]), block_shift_action(G, NUM_CLASSES // NUM_ANGLES)


def verify_equivariance_report(
    model: Model,
    images: np.ndarray,
    input_action: Optional[GroupAction] = None,
    output_action: Optional[GroupAction] = None,
) -> EquivarianceTable:
    """
    Run every image through all four rotations one sample at a time and
    compare against the block-shifted output of the upright image.
    """
    images = np.asarray(images)
    if images.ndim == len(model.input_shape):
        images = images[None]
    if images.shape[1:] != model.input_shape:
        raise ShapeError(f"Expected images of shape {model.input_shape}, got {images.shape[1:]}")
    if model.output_shape != (NUM_CLASSES,):
        raise ShapeError(f"Expected a model with {NUM_CLASSES} outputs, got {model.output_shape}")
    default_in, default_out = _default_actions(model)
    input_action = input_action or model.domain_action or default_in
    output_action = output_action or model.codomain_action or default_out

    rows: List[RotationRow] = []
    exact = 0
    worst = 0.0
    worst_marginal = 0.0
    argmax_agrees = True
    for i, x in enumerate(images):
        base = model.predict(x)
        base_marginal = digit_marginal(probabilities(base))
        for k in range(NUM_ANGLES):
            out = model.predict(input_action.apply(k, x))
            expected = output_action.apply(k, base)
            same = bit_equal(out, expected)
            dev = max_abs_deviation(out, expected)
            exact += same
            worst = max(worst, dev)
            marginal = digit_marginal(probabilities(out))
            worst_marginal = max(worst_marginal, max_abs_deviation(marginal, base_marginal))
            argmax_agrees &= int(np.argmax(marginal)) == int(np.argmax(base_marginal))
            digit, angle = decode_label(int(np.argmax(out)))
            rows.append(RotationRow(
                image=i,
                rotation=k,
                predicted_digit=digit,
                predicted_angle=angle,
                probabilities=probabilities(out).tolist(),
                shift_exact=same,
                deviation=dev,
            ))
            if not same:
                logger.warning(f"⚠️ Image {i}, rotation {k}: output differs from the block shift by {dev:.3e}")

    table = EquivarianceTable(
        rows=rows,
        images=len(images),
        exact_matches=exact,
        checks=len(images) * NUM_ANGLES,
        max_deviation=worst,
        max_marginal_deviation=worst_marginal,
        digit_argmax_agrees=argmax_agrees,
    )
    logger.info(f"Equivariance check: {table.exact_matches}/{table.checks} exact, max deviation {table.max_deviation:.3e}")
    return table
