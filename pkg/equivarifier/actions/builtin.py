# equivarifier/actions/builtin.py
"""
Built-in actions: image rotation by right angles, block shifts of G-product
tensors, the trivial action, and actions pulled back through a quotient.

All array actions here are exact index permutations, so the action laws
hold bit for bit.
"""

import logging
from typing import Any, Optional, Sequence, Tuple

import numpy as np

from ..errors import BlockMismatchError, CarrierMismatchError, NonSquareError, WrongGroupError
from ..groups.core import FiniteGroup, cyclic_group
from ..groups.subgroups import QuotientGroup
from .base import CarrierShape, FunctionAction, GroupAction, PermutationAction

logger = logging.getLogger(__name__)

_C4 = cyclic_group(4)


def rot90_action(G: FiniteGroup, h: int, w: int, c: int = 1) -> PermutationAction:
    """
    C4 acting on h×w×c images; element k rotates by 90k degrees
    counterclockwise (np.rot90 on the spatial axes) and leaves channels alone.
    """
    if G.order != 4 or not G.same_table(_C4):
        raise WrongGroupError(f"rot90_action needs the cyclic group of order 4, got {G.name} (order {G.order})")
    if h != w:
        raise NonSquareError(f"Rotation by 90 degrees needs square images, got {h}x{w}")
    index = np.arange(h * w * c).reshape(h, w, c)
    perms = np.stack([np.rot90(index, k, axes=(0, 1)).ravel() for k in range(4)])
    return PermutationAction(G, (h, w, c), perms, label="rot90")


def trivial_action(G: FiniteGroup, carrier_shape: CarrierShape = None) -> GroupAction:
    """Every element acts as the identity."""
    if carrier_shape is None:
        return FunctionAction(G, lambda g, x: x, None, label="trivial")
    size = int(np.prod(carrier_shape, dtype=np.int64))
    perms = np.broadcast_to(np.arange(size), (G.order, size))
    return PermutationAction(G, tuple(carrier_shape), perms, label="trivial")


def source_components(G: FiniteGroup, h: int) -> np.ndarray:
    """
    Component sources for the induced action on Z^{×G}:
    (h·s)_k = s_{src[k]} with src[k] = index of h⁻¹·g_k.
    """
    return np.asarray(G.table[G.inverse(h)], dtype=np.int64)


def block_shift_action(
    G: FiniteGroup,
    block_size: Optional[int] = None,
    carrier_shape: Optional[Sequence[int]] = None,
    axis: int = -1,
) -> PermutationAction:
    """
    The induced G-product action on |G| contiguous blocks along `axis`.

    Without carrier_shape the carrier is a flat vector of |G|·block_size
    entries. With C4 and blocks (z0, z1, z2, z3), the generator maps them to
    (z3, z0, z1, z2).
    """
    n = G.order
    if carrier_shape is None:
        if block_size is None or block_size < 1:
            raise BlockMismatchError("block_shift_action needs a positive block_size or a carrier_shape")
        carrier_shape = (n * block_size,)
    shape: Tuple[int, ...] = tuple(int(d) for d in carrier_shape)
    if not shape:
        raise CarrierMismatchError("block_shift_action needs at least one carrier axis")
    axis = axis % len(shape)
    length = shape[axis]
    if length % n != 0:
        raise BlockMismatchError(f"Axis length {length} is not divisible by |G| = {n}")
    if block_size is None:
        block_size = length // n
    if block_size * n != length:
        raise BlockMismatchError(f"Axis length {length} != |G| * block_size = {n} * {block_size}")

    index = np.moveaxis(np.arange(int(np.prod(shape))).reshape(shape), axis, -1)
    blocks = index.reshape(*index.shape[:-1], n, block_size)
    perms = []
    for h in G.elements:
        shifted = blocks[..., source_components(G, h), :].reshape(index.shape)
        perms.append(np.moveaxis(shifted, -1, axis).ravel())
    action = PermutationAction(G, shape, np.stack(perms), label="block_shift")
    action.block_size = block_size
    action.axis = axis
    return action


def action_through_quotient(Q: QuotientGroup, A: GroupAction) -> GroupAction:
    """Pull an action of G/N back to G: g acts as projection(g)."""
    if not Q.group.same_table(A.group):
        raise WrongGroupError(f"Action is over {A.group.name}, quotient is {Q.group.name}")
    if isinstance(A, PermutationAction):
        return PermutationAction(Q.parent, A.carrier_shape, A.perms[Q.projection], label=f"{A.label}∘proj")

    def pulled_back(g: int, x: Any) -> Any:
        return A.apply(int(Q.projection[g]), x)

    return FunctionAction(Q.parent, pulled_back, A.carrier_shape, label=f"{getattr(A, 'label', 'action')}∘proj")
