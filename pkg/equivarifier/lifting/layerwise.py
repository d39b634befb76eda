# equivarifier/lifting/layerwise.py
"""
Layer-by-layer equivarification.

Layer 0 is lifted against the input action. Every later layer L_i is lifted
against the block-shift action on the previous stacked output, either as
given (it then sees all |G| blocks) or precomposed with the projection,
L_i ∘ p_i, in which case the chain reproduces the one-shot lift of the
composed network.
"""

import logging
from typing import Any, Callable, List, Optional, Sequence, Union

import numpy as np

from ..actions.base import FunctionAction, GroupAction, PermutationAction
from ..actions.builtin import block_shift_action
from ..errors import CompositionError, WrongGroupError
from ..groups.core import FiniteGroup
from ..nn.layers import BlockProjection, Layer, LiftedLayer, Sequential
from .gproduct import EquivariantMap, GProductAction, project
from .lift import lift

logger = logging.getLogger(__name__)

MapOrLayer = Union[Layer, Callable[[Any], Any]]


def _per_sample(fn: Callable[[np.ndarray], np.ndarray], carrier_shape) -> Callable[[np.ndarray], np.ndarray]:
    """Let a batch-only callable also take a single sample."""
    def call(x):
        x = np.asarray(x)
        if tuple(x.shape) == tuple(carrier_shape):
            return fn(x[None])[0]
        return fn(x)
    return call


def equivarify_layer(
    L: MapOrLayer,
    A: GroupAction,
    G: FiniteGroup,
    base_shape: Optional[Sequence[int]] = None,
    name: Optional[str] = None,
) -> EquivariantMap:
    """
    Lift one layer against the action on its full input.

    A network Layer becomes a trainable LiftedLayer (parameters shared by
    all |G| branches) whose output stacks the branches along the last axis.
    Plain callables go through `lift` with stack_axis=-1 and need base_shape.
    """
    if not G.same_table(A.group):
        raise WrongGroupError(f"Action is over {A.group.name}, layer lift requested over {G.name}")
    if not isinstance(L, Layer):
        return lift(L, A, G, stack_axis=-1, base_shape=base_shape, name=name or "layer_lift")

    if not isinstance(A, PermutationAction):
        raise CompositionError("Network layers can only be lifted against permutation actions")
    lifted = LiftedLayer(L, A, name=name)
    out_shape = lifted.output_shape(A.carrier_shape)
    codomain = block_shift_action(G, carrier_shape=out_shape, axis=-1)
    return EquivariantMap(
        group=G,
        domain_action=A,
        codomain_action=codomain,
        forward=_per_sample(lambda xb: lifted.forward(xb)[0], A.carrier_shape),
        base_map=_per_sample(lambda xb: L.forward(xb)[0], A.carrier_shape),
        name=lifted.name,
        layer=lifted,
        stack_axis=-1,
    )


def _same_action(a: GroupAction, b: GroupAction) -> bool:
    if a is b:
        return True
    if not a.group.same_table(b.group):
        return False
    if isinstance(a, PermutationAction) and isinstance(b, PermutationAction):
        return a.carrier_shape == b.carrier_shape and np.array_equal(a.perms, b.perms)
    if isinstance(a, GProductAction) and isinstance(b, GProductAction):
        return True
    if isinstance(a, FunctionAction) and isinstance(b, FunctionAction):
        return a.label == b.label and a.carrier_shape == b.carrier_shape
    return False


def identity_map(A: GroupAction) -> EquivariantMap:
    """The identity X → X, equivariant for A on both sides."""
    return EquivariantMap(A.group, A, A, lambda x: x, base_map=lambda x: x, name="identity")


def compose_equivariant(maps: Sequence[EquivariantMap]) -> EquivariantMap:
    """
    Function composition, first map applied first. Adjacent maps must agree
    on the action between them; the result is not re-verified here.
    """
    maps = list(maps)
    if not maps:
        raise CompositionError("compose_equivariant needs at least one map")
    for i, (left, right) in enumerate(zip(maps, maps[1:])):
        if not left.group.same_table(right.group):
            raise CompositionError(f"Maps {i} and {i + 1} are over different groups")
        if not _same_action(left.codomain_action, right.domain_action):
            raise CompositionError(
                f"Map {i} ends in {left.codomain_action.describe()} but map {i + 1} "
                f"starts from {right.domain_action.describe()}"
            )

    forwards = [m.forward for m in maps]

    def forward(x: Any) -> Any:
        for f in forwards:
            x = f(x)
        return x

    layers = [m.layer for m in maps if m.layer is not None]
    network = Sequential(layers, name="chain") if len(layers) == len(maps) else None
    last = maps[-1]
    return EquivariantMap(
        group=maps[0].group,
        domain_action=maps[0].domain_action,
        codomain_action=last.codomain_action,
        forward=forward,
        name=" ∘ ".join(m.name for m in reversed(maps)),
        layer=network,
        stack_axis=last.stack_axis,
        extras=dict(last.extras),
    )


def precompose_projection(L: MapOrLayer, n_blocks: int, name: Optional[str] = None) -> MapOrLayer:
    """L ∘ p on a stacked input: L only sees block 0."""
    if isinstance(L, Layer):
        return Sequential([BlockProjection(n_blocks, name=f"{L.name}.p"), L], name=name or f"{L.name}∘p")
    return lambda x: L(project(np.asarray(x), n_blocks, -1))


def equivarify_chain(
    layers: Sequence[MapOrLayer],
    input_action: GroupAction,
    G: FiniteGroup,
    base_shapes: Optional[Sequence[Sequence[int]]] = None,
) -> EquivariantMap:
    """
    Lift L_0, then L_i ∘ p_i for i ≥ 1, and compose.

    The composite equals lift(L_n ∘ ... ∘ L_0): component k of every stage
    is the base chain evaluated at g_k⁻¹·x. base_shapes (per-sample output
    shapes of each L_i) are needed only for plain callables.
    """
    if not layers:
        raise CompositionError("equivarify_chain needs at least one layer")
    stages: List[EquivariantMap] = []
    action = input_action
    for i, L in enumerate(layers):
        shape = base_shapes[i] if base_shapes is not None else None
        base = L if i == 0 else precompose_projection(L, G.order)
        stage = equivarify_layer(base, action, G, base_shape=shape)
        stages.append(stage)
        action = stage.codomain_action
    chain = compose_equivariant(stages)
    logger.debug(f"Equivarified chain of {len(stages)} layers over {G.name}")
    return chain
