import itertools

import numpy as np
import pytest

from equivarifier.actions import FunctionAction, PermutationAction, block_shift_action, rot90_action, trivial_action
from equivarifier.errors import CompositionError, NotWellDefinedError, WrongGroupError
from equivarifier.groups import cyclic_group, dihedral_group, kernel_of_action, make_subgroup, quotient_group
from equivarifier.lifting import (
    EquivariantMap,
    GProductAction,
    GProductValue,
    check_equivariance,
    compose_equivariant,
    enumerate_constrained_lifts,
    equivariance_report,
    equivarify_chain,
    equivarify_layer,
    identity_map,
    lift,
    lift_through_quotient,
    project,
    split_components,
    stack_components,
    universal_map,
    verify_lift_uniqueness,
)
from equivarifier.nn.layers import Conv2D, Dense, Flatten, MaxPool2D, ReLU, Sequential

C2 = cyclic_group(2)
C4 = cyclic_group(4)


def translation(G, n):
    return FunctionAction(G, lambda k, x: (x + k) % n, label=f"translate{n}")


def _images(count, h=6, c=1, seed=0):
    return list(np.random.default_rng(seed).random((count, h, h, c)))


# --- lift -------------------------------------------------------------------

def test_translation_lift():
    F_hat = lift(lambda x: x, translation(C4, 4), C4)
    assert F_hat(0).as_tuple() == (0, 3, 2, 1)
    assert project(F_hat(2)) == 2


def test_constant_lift():
    F_hat = lift(lambda x: 7.0, rot90_action(C4, 6, 6), C4)
    assert F_hat(_images(1)[0]).as_tuple() == (7.0,) * 4


def test_lift_components_follow_inverse_rotations():
    A = rot90_action(C4, 6, 6)
    F = lambda x: x[:, 0, 0] * 2.0  # noqa: E731
    x = _images(1)[0]
    s = lift(F, A, C4)(x)
    for k in range(4):
        assert np.array_equal(s[k], F(A.apply(C4.inverse(k), x)))
    assert np.array_equal(project(s), F(x))


def test_lift_is_exactly_equivariant():
    A = rot90_action(C4, 6, 6)
    F = lambda x: np.tanh(x.sum(axis=0)).ravel()  # noqa: E731
    assert check_equivariance(lift(F, A, C4), _images(4)) == 0.0
    stacked = lift(F, A, C4, stack_axis=-1, base_shape=(6,))
    assert check_equivariance(stacked, _images(4)) == 0.0
    assert stacked(_images(1)[0]).shape == (24,)


def test_lift_threaded_matches_sequential():
    A = rot90_action(C4, 6, 6)
    F = lambda x: np.sin(x).sum(axis=(0, 1))  # noqa: E731
    x = _images(1)[0]
    assert lift(F, A, C4)(x) == lift(F, A, C4, max_workers=4)(x)


def test_trivial_action_gives_identical_components():
    s = lift(lambda x: x * 3, trivial_action(C4), C4)(2)
    assert s.as_tuple() == (6, 6, 6, 6)


def test_lift_wrong_group():
    with pytest.raises(WrongGroupError):
        lift(lambda x: x, translation(C4, 4), C2)


def test_project_of_shifted_tuple():
    s = GProductValue(["z0", "z1", "z2", "z3"])
    action = GProductAction(C4)
    assert action.apply(1, s).as_tuple() == ("z3", "z0", "z1", "z2")
    for g in C4.elements:
        assert project(action.apply(g, s)) == s[C4.inverse(g)]


def test_stack_and_split_components():
    parts = [np.full((2, 3), k) for k in range(4)]
    stacked = stack_components(GProductValue(parts), axis=-1)
    assert stacked.shape == (2, 12)
    assert all(np.array_equal(a, b) for a, b in zip(split_components(stacked, 4, axis=-1), parts))


def test_mismatched_actions_are_detected():
    A = rot90_action(C4, 6, 6)
    bogus = EquivariantMap(C4, A, trivial_action(C4, (6, 6, 1)), lambda x: x)
    assert check_equivariance(bogus, _images(1)) > 0


def test_constant_map_into_trivial_action():
    M = EquivariantMap(C4, rot90_action(C4, 6, 6), trivial_action(C4, (2,)), lambda x: np.ones(2))
    assert check_equivariance(M, _images(2)) == 0.0


def test_equivariance_report_per_element():
    report = equivariance_report(lift(lambda x: x, translation(C4, 4), C4), range(4))
    assert report.exact
    assert report.per_element == [0.0] * 4


# --- uniqueness ---------------------------------------------------------------

@pytest.mark.parametrize(
    "G, action, domain, F, codomain",
    [
        (C2, translation(C2, 2), range(2), lambda x: x, (0, 1)),
        (C4, translation(C4, 4), range(4), lambda x: x, range(4)),
        (C4, FunctionAction(C4, lambda k, x: (x + 2 * k) % 8, label="step2"), range(8), lambda x: x % 3, range(3)),
        (
            dihedral_group(3),
            FunctionAction(dihedral_group(3), lambda g, x: (g % 3 + (-x if g >= 3 else x)) % 3, label="vertices"),
            range(3),
            lambda x: int(x == 0),
            (0, 1),
        ),
    ],
)
def test_lift_is_unique(G, action, domain, F, codomain):
    report = verify_lift_uniqueness(F, action, G, list(domain), list(codomain))
    assert report.unique


def test_oracle_finds_no_lift_when_codomain_too_small():
    solutions = list(enumerate_constrained_lifts(lambda x: x, translation(C4, 4), C4, range(4), (0, 1)))
    assert solutions == []


# --- universal property -------------------------------------------------------

def test_universal_map_of_the_gproduct_is_identity():
    action = GProductAction(C4)
    pi = universal_map(project, action, C4)
    s = GProductValue([3, 1, 4, 1])
    assert pi(s) == s


def test_universal_map_swapped_enumeration():
    # Ẑ' stores (s(g), s(e)); C2 swaps both entries.
    swapped = FunctionAction(C2, lambda k, t: (t[1], t[0]) if k else t, label="swapped")
    p_prime = lambda t: t[1]  # noqa: E731
    pi = universal_map(p_prime, swapped, C2)
    values = [(a, b) for a in (0, 1) for b in (0, 1)]
    for t in values:
        assert pi(t).as_tuple() == (t[1], t[0])
        assert project(pi(t)) == p_prime(t)
        for h in C2.elements:
            assert pi(swapped.apply(h, t)) == GProductAction(C2).apply(h, pi(t))

    # π ∘ F̂' = F̂ for the lift into Ẑ'.
    X = translation(C2, 2)
    F = lambda x: 1 - x  # noqa: E731
    F_hat = lift(F, X, C2)
    for x in range(2):
        s = F_hat(x)
        F_hat_prime = (s[1], s[0])
        assert pi(F_hat_prime) == s


def _reversed_order(t):
    # position j holds s(g^-j); the map is its own inverse on C4
    return tuple(t[C4.inverse(j)] for j in range(4))


def test_universal_map_reversed_c4_product_exhaustive():
    canonical = GProductAction(C4)

    def act(h, t):
        return _reversed_order(canonical.apply(h, GProductValue(_reversed_order(t))).as_tuple())

    reversed_product = FunctionAction(C4, act, label="reversed")
    p_prime = lambda t: t[0]  # noqa: E731
    pi = universal_map(p_prime, reversed_product, C4)
    values = list(itertools.product(range(3), repeat=4))
    assert len(values) == 81
    for t in values:
        assert pi(t).as_tuple() == _reversed_order(t)
        assert project(pi(t)) == p_prime(t)
        for h in C4.elements:
            assert pi(reversed_product.apply(h, t)) == canonical.apply(h, pi(t))

    X = translation(C4, 4)
    F = lambda x: (2 * x) % 3  # noqa: E731
    F_hat = lift(F, X, C4)
    for x in range(4):
        F_hat_prime = _reversed_order(F_hat(x).as_tuple())
        assert pi(F_hat_prime) == F_hat(x)


def test_universal_map_wrong_group():
    with pytest.raises(WrongGroupError):
        universal_map(project, GProductAction(C4), C2)


# --- quotient -----------------------------------------------------------------

def _swap(G):
    return FunctionAction(G, lambda k, x: 1 - x if k % 2 else x, label="swap")


def test_quotient_lift_has_two_components():
    A = _swap(C4)
    Q = quotient_group(C4, kernel_of_action(C4, A, [0, 1]))
    M = lift_through_quotient(lambda x: 10 * x, A, Q, [0, 1])
    assert len(M(0)) == 2
    assert M(0).as_tuple() == (0, 10)
    assert M.project_output(M(1)) == 10
    assert equivariance_report(M, [0, 1]).exact


def test_quotient_lift_effective_action_matches_plain_lift():
    A = rot90_action(C4, 6, 6)
    probe = np.arange(36, dtype=float).reshape(6, 6, 1)
    Q = quotient_group(C4, kernel_of_action(C4, A, [probe]))
    F = lambda x: x[0, :, 0]  # noqa: E731
    x = _images(1)[0]
    assert lift_through_quotient(F, A, Q, [probe])(x) == lift(F, A, C4)(x)


def test_quotient_lift_trivial_action():
    A = trivial_action(C4)
    Q = quotient_group(C4, kernel_of_action(C4, A, [0]))
    assert lift_through_quotient(lambda x: x + 1, A, Q, [5])(5).as_tuple() == (6,)


def test_quotient_lift_requires_descent():
    Q = quotient_group(C4, make_subgroup(C4, [0, 2]))
    with pytest.raises(NotWellDefinedError):
        lift_through_quotient(lambda x: x, translation(C4, 4), Q, [0, 1])


# --- layers and chains -------------------------------------------------------

def _stages(rng):
    return [
        Sequential([Conv2D(1, 2, 3, rng, name="c1"), ReLU("r1")], name="s1"),
        Sequential([Conv2D(2, 3, 3, rng, name="c2"), ReLU("r2")], name="s2"),
        Sequential([MaxPool2D(2, name="pool"), Flatten("flat"), Dense(27, 5, rng, name="dense")], name="s3"),
    ]


def test_equivarified_layer_is_exact_and_adds_no_parameters():
    rng = np.random.default_rng(0)
    conv = Conv2D(1, 3, 3, rng, name="conv")
    stage = equivarify_layer(conv, rot90_action(C4, 6, 6), C4)
    assert stage.layer.num_parameters == conv.num_parameters
    assert stage(_images(1)[0]).shape == (6, 6, 12)
    assert check_equivariance(stage, _images(100)) == 0.0


def test_equivarified_layer_first_block_is_the_layer():
    rng = np.random.default_rng(1)
    conv = Conv2D(1, 2, 3, rng, name="conv")
    x = _images(1)[0]
    stage = equivarify_layer(conv, rot90_action(C4, 6, 6), C4)
    out = stage(x)
    assert np.array_equal(out[..., :2], conv(x[None])[0])
    assert np.array_equal(stage.project_output(out), out[..., :2])


def test_chain_matches_monolithic_lift():
    rng = np.random.default_rng(2)
    stages = _stages(rng)
    A = rot90_action(C4, 6, 6)
    chain = equivarify_chain(stages, A, C4)
    whole = equivarify_layer(Sequential(stages, name="whole"), A, C4)
    batch = np.stack(_images(100, seed=3))
    assert np.max(np.abs(chain(batch) - whole(batch))) <= 1e-12
    assert chain.layer.num_parameters == sum(s.num_parameters for s in stages)
    assert check_equivariance(chain, list(batch)) == 0.0


def test_callable_chain_on_a_toy_domain():
    shift = PermutationAction(C4, (4,), [np.roll(np.arange(4), -k) for k in range(4)], label="roll")
    L0 = lambda x: 2 * x + x.sum(axis=-1, keepdims=True)  # noqa: E731
    L1 = lambda y: y[..., :1] * y[..., 1:2]  # noqa: E731
    chain = equivarify_chain([L0, L1], shift, C4, base_shapes=[(4,), (1,)])
    whole = lift(lambda x: L1(L0(x)), shift, C4, stack_axis=-1, base_shape=(1,))
    for x in np.eye(4):
        assert np.array_equal(chain(x), whole(x))


def test_compose_with_identity():
    A = rot90_action(C4, 6, 6)
    F = lift(lambda x: x.sum(axis=(0, 1)), A, C4, stack_axis=-1, base_shape=(1,))
    composed = compose_equivariant([identity_map(A), F])
    x = _images(1)[0]
    assert np.array_equal(composed(x), F(x))


def test_compose_rejects_mismatched_actions():
    A = rot90_action(C4, 6, 6)
    F = lift(lambda x: x.sum(axis=(0, 1)), A, C4, stack_axis=-1, base_shape=(1,))
    with pytest.raises(CompositionError):
        compose_equivariant([F, identity_map(block_shift_action(C4, 2))])
    with pytest.raises(CompositionError):
        compose_equivariant([])
