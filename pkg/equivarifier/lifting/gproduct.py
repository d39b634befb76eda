# equivarifier/lifting/gproduct.py
"""
The G-product Z^{×G}: maps s: G → Z stored as |G|-tuples, component k
holding s(g_k) in the group's index order (for cyclic groups g_k = g^k).

G acts by (h·s)(g') = s(h⁻¹g'), i.e. component k of h·s is component
index(h⁻¹·g_k) of s. For C4 and the generator this is
(z0, z1, z2, z3) ↦ (z3, z0, z1, z2).

Tensors stack the components as contiguous blocks along one axis; the same
action is then block_shift_action.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..actions.base import GroupAction
from ..actions.builtin import source_components
from ..errors import BlockMismatchError, CarrierMismatchError
from ..groups.core import FiniteGroup


class GProductValue:
    """An ordered |G|-tuple of base values."""

    __slots__ = ("components",)
    __hash__ = None

    def __init__(self, components: Sequence[Any]):
        self.components: Tuple[Any, ...] = tuple(components)

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, k: int) -> Any:
        return self.components[k]

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GProductValue):
            return NotImplemented
        if len(other) != len(self):
            return False
        return all(_value_equal(a, b) for a, b in zip(self.components, other.components))

    @property
    def base_shape(self) -> Tuple[int, ...]:
        return tuple(np.shape(self.components[0])) if self.components else ()

    def as_tuple(self) -> Tuple[Any, ...]:
        """Components as plain Python scalars where possible."""
        return tuple(c.item() if isinstance(c, np.generic) or (isinstance(c, np.ndarray) and c.ndim == 0) else c
                     for c in self.components)

    def __repr__(self) -> str:
        return f"GProductValue({self.as_tuple()!r})"


def _value_equal(a: Any, b: Any) -> bool:
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return bool(np.array_equal(a, b))
    return bool(a == b)


class GProductAction(GroupAction):
    """The induced action of G on GProductValue tuples."""

    def __init__(self, group: FiniteGroup):
        self.group = group
        self.carrier_shape = None
        self.label = "gproduct"
        self._sources = [source_components(group, h) for h in group.elements]

    def apply(self, h: int, s: Any) -> GProductValue:
        h = self.group.validate_element(h)
        if not isinstance(s, GProductValue) or len(s) != self.group.order:
            raise CarrierMismatchError(f"Expected a {self.group.order}-component GProductValue, got {s!r}")
        return GProductValue(s.components[int(i)] for i in self._sources[h])

    def describe(self) -> str:
        return f"gproduct({self.group.name})"


def project(s: Any, n_blocks: Optional[int] = None, axis: int = -1) -> Any:
    """
    p(s) = s(e), the identity component.

    For a stacked tensor pass n_blocks (= |G|) and the stacking axis; the
    first block is returned.
    """
    if isinstance(s, GProductValue):
        return s.components[0]
    if n_blocks is None:
        raise CarrierMismatchError("project needs n_blocks for a stacked tensor")
    return split_components(np.asarray(s), n_blocks, axis)[0]


def stack_components(components: Sequence[np.ndarray], axis: int = -1) -> np.ndarray:
    """GProductValue → tensor: concatenate the blocks along `axis`."""
    if isinstance(components, GProductValue):
        components = components.components
    return np.concatenate([np.asarray(c) for c in components], axis=axis)


def split_components(x: np.ndarray, n_blocks: int, axis: int = -1) -> List[np.ndarray]:
    """Tensor → list of blocks; the axis must divide into n_blocks equal parts."""
    if x.shape[axis] % n_blocks:
        raise BlockMismatchError(f"Axis of length {x.shape[axis]} does not split into {n_blocks} blocks")
    return np.split(x, n_blocks, axis=axis)


@dataclass
class EquivariantMap:
    """
    A map X → Ẑ with the actions it intertwines.

    `base_map` is the F it lifts (p ∘ forward = base_map). `layer` is set when
    the map is backed by a trainable network layer.
    """

    group: FiniteGroup
    domain_action: GroupAction
    codomain_action: GroupAction
    forward: Callable[[Any], Any]
    base_map: Optional[Callable[[Any], Any]] = None
    name: str = "lift"
    layer: Any = None
    stack_axis: Optional[int] = None
    extras: dict = field(default_factory=dict)

    def __call__(self, x: Any) -> Any:
        return self.forward(x)

    def project_output(self, y: Any) -> Any:
        """p applied to an output of this map."""
        if isinstance(y, GProductValue):
            return y.components[0]
        n_blocks = self.extras.get("n_blocks", self.group.order)
        return project(y, n_blocks, self.stack_axis if self.stack_axis is not None else -1)
