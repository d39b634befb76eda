import numpy as np
import pytest

from equivarifier.actions import (
    FunctionAction,
    PermutationAction,
    action_through_quotient,
    apply,
    block_shift_action,
    is_fixed,
    rot90_action,
    trivial_action,
    verify_action,
)
from equivarifier.errors import (
    BlockMismatchError,
    CarrierMismatchError,
    InsufficientProbeError,
    NonSquareError,
    WrongGroupError,
)
from equivarifier.groups import cyclic_group, dihedral_group, kernel_of_action, make_subgroup, quotient_group

C4 = cyclic_group(4)


def _images(count, h=5, c=1, seed=0):
    return list(np.random.default_rng(seed).random((count, h, h, c)))


def test_rot90_two_by_two():
    A = rot90_action(C4, 2, 2, 1)
    x = np.array([[1, 2], [3, 4]]).reshape(2, 2, 1)
    assert apply(A, 1, x)[..., 0].tolist() == [[2, 4], [1, 3]]


def test_rot90_matches_numpy_and_has_order_four():
    A = rot90_action(C4, 28, 28, 1)
    x = _images(1, 28)[0]
    assert np.array_equal(A.apply(1, x), np.rot90(x, 1, axes=(0, 1)))
    y = x
    for _ in range(4):
        y = A.apply(1, y)
    assert np.array_equal(y, x)
    assert np.array_equal(A.apply(2, A.apply(2, x)), x)
    assert np.array_equal(A.apply(0, x), x)


def test_rot90_keeps_channels_apart():
    A = rot90_action(C4, 4, 4, 3)
    x = _images(1, 4, c=3)[0]
    rotated = A.apply(3, x)
    for ch in range(3):
        assert np.array_equal(rotated[..., ch], np.rot90(x[..., ch], 3))


def test_rot90_batched():
    A = rot90_action(C4, 5, 5)
    batch = np.stack(_images(3))
    out = A.apply(1, batch)
    for i in range(3):
        assert np.array_equal(out[i], A.apply(1, batch[i]))


def test_rot90_errors():
    with pytest.raises(NonSquareError):
        rot90_action(C4, 4, 5)
    with pytest.raises(WrongGroupError):
        rot90_action(cyclic_group(3), 4, 4)
    with pytest.raises(WrongGroupError):
        rot90_action(dihedral_group(2), 4, 4)
    with pytest.raises(CarrierMismatchError):
        rot90_action(C4, 4, 4).apply(1, np.zeros((3, 3, 1)))


def test_block_shift_examples():
    A = block_shift_action(C4, 10)
    blocks = [np.full(10, k, dtype=float) for k in range(4)]
    z = np.concatenate(blocks)
    assert np.array_equal(A.apply(1, z), np.concatenate([blocks[3], blocks[0], blocks[1], blocks[2]]))
    assert np.array_equal(A.apply(2, z), np.concatenate([blocks[2], blocks[3], blocks[0], blocks[1]]))
    assert np.array_equal(A.apply(0, z), z)


def test_block_shift_preserves_entries():
    A = block_shift_action(dihedral_group(3), 4)
    z = np.random.default_rng(1).random(24)
    for g in A.group.elements:
        assert np.array_equal(np.sort(A.apply(g, z)), np.sort(z))


def test_block_shift_channel_axis():
    A = block_shift_action(C4, carrier_shape=(3, 3, 8))
    assert A.block_size == 2
    x = np.random.default_rng(2).random((3, 3, 8))
    y = A.apply(1, x)
    assert np.array_equal(y[..., 0:2], x[..., 6:8])
    assert np.array_equal(y[..., 2:4], x[..., 0:2])


def test_block_shift_mismatch():
    with pytest.raises(BlockMismatchError):
        block_shift_action(C4, carrier_shape=(10,))
    with pytest.raises(BlockMismatchError):
        block_shift_action(C4)


def test_trivial_action():
    A = trivial_action(C4, (3,))
    x = np.array([1.0, 2.0, 3.0])
    for g in C4.elements:
        assert np.array_equal(A.apply(g, x), x)
    assert verify_action(A, [x]).ok


def test_action_through_quotient():
    Q = quotient_group(C4, make_subgroup(C4, [0, 2]))
    swap = PermutationAction(Q.group, (2,), [[0, 1], [1, 0]], label="swap")
    pulled = action_through_quotient(Q, swap)
    x = np.array([5.0, 7.0])
    assert np.array_equal(pulled.apply(1, x), [7.0, 5.0])
    assert np.array_equal(pulled.apply(3, x), [7.0, 5.0])
    assert np.array_equal(pulled.apply(2, x), x)
    assert verify_action(pulled, [x]).ok
    assert set(kernel_of_action(C4, pulled, [x]).members) >= {0, 2}


def test_action_through_quotient_wrong_group():
    Q = quotient_group(C4, make_subgroup(C4, [0, 2]))
    with pytest.raises(WrongGroupError):
        action_through_quotient(Q, trivial_action(C4, (2,)))


def test_verify_action_on_rotations():
    report = verify_action(rot90_action(C4, 5, 5), _images(5))
    assert report.ok
    assert report.max_deviation == 0.0
    assert report.checked == 5 * 16


def test_verify_action_flags_corruption():
    good = rot90_action(C4, 4, 4)
    perms = good.perms.copy()
    perms[1] = perms[2]
    corrupted = PermutationAction(C4, (4, 4, 1), perms, label="corrupted")
    report = verify_action(corrupted, _images(2, 4))
    assert not report.ok
    assert report.composition_deviation > 0


def test_verify_action_function_action():
    C3 = cyclic_group(3)
    A = FunctionAction(C3, lambda k, x: (x + k) % 3)
    assert verify_action(A, [0, 1, 2]).ok


def test_verify_action_needs_samples():
    with pytest.raises(InsufficientProbeError):
        verify_action(trivial_action(C4), [])


def test_permutation_rows_must_be_permutations():
    with pytest.raises(CarrierMismatchError):
        PermutationAction(cyclic_group(2), (2,), [[0, 1], [0, 0]])


def test_permutation_and_fixed_points():
    A = rot90_action(C4, 2, 2)
    assert A.permutation(0).tolist() == [0, 1, 2, 3]
    assert sorted(A.permutation(1).tolist()) == [0, 1, 2, 3]
    constant = np.full((2, 2, 1), 5.0)
    assert all(is_fixed(A, g, constant) for g in C4.elements)
    assert not is_fixed(A, 1, np.arange(4.0).reshape(2, 2, 1))
    flip = FunctionAction(C4, lambda k, x: (x + 2 * k) % 4, label="flip")
    assert flip.permutation(1) is None
    assert is_fixed(flip, 2, 3)
    assert not is_fixed(flip, 1, 3)
