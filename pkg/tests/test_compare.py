import math

import numpy as np

from equivarifier.lifting import GProductValue
from equivarifier.utils import bit_equal, max_abs_deviation


def test_bit_equal_checks_dtype():
    x = np.arange(4.0)
    assert bit_equal(x, x.copy())
    assert not bit_equal(x, x.astype(np.float32))
    assert not bit_equal(x, x.reshape(2, 2))
    assert not bit_equal(x, x + 1e-12)


def test_max_abs_deviation():
    assert max_abs_deviation(np.array([1.0, 2.0]), np.array([1.0, 2.5])) == 0.5
    assert max_abs_deviation(np.array([np.nan]), np.array([np.nan])) == 0.0
    assert max_abs_deviation(np.array([np.nan]), np.array([1.0])) == math.inf
    assert max_abs_deviation(np.ones(2), np.ones(3)) == math.inf
    assert max_abs_deviation("a", "a") == 0.0
    assert max_abs_deviation(GProductValue([1, 2]), GProductValue([1, 5])) == 3.0
