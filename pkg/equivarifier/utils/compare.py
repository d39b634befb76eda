# equivarifier/utils/compare.py
"""Deviation helpers shared by the action, lift and model checks."""

import math
from typing import Any

import numpy as np


def max_abs_deviation(a: Any, b: Any) -> float:
    """
    Largest elementwise |a - b|.

    Values that cannot be compared numerically (shape mismatch, non-numeric
    toy values) count as 0 when equal and inf otherwise. Tuple-valued results
    (anything with `components`) are compared component by component.
    """
    if hasattr(a, "components") and hasattr(b, "components"):
        if len(a.components) != len(b.components):
            return math.inf
        return max((max_abs_deviation(u, v) for u, v in zip(a.components, b.components)), default=0.0)
    try:
        x = np.asarray(a, dtype=np.float64)
        y = np.asarray(b, dtype=np.float64)
    except (TypeError, ValueError):
        return 0.0 if a == b else math.inf
    if x.shape != y.shape:
        return math.inf
    if x.size == 0:
        return 0.0
    same = (x == y) | (np.isnan(x) & np.isnan(y))
    with np.errstate(invalid="ignore"):
        diff = np.where(same, 0.0, np.abs(x - y))
    # A NaN left over means one side only is NaN.
    diff = np.where(np.isnan(diff), math.inf, diff)
    return float(diff.max())


def bit_equal(a: Any, b: Any) -> bool:
    """Exact equality: same dtype, same shape, same values."""
    x, y = np.asarray(a), np.asarray(b)
    return x.dtype == y.dtype and x.shape == y.shape and bool(np.array_equal(x, y))
