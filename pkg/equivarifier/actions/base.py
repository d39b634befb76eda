# equivarifier/actions/base.py
"""
Base classes for group actions.

An action pairs a FiniteGroup with a transform of some carrier space. The
built-in actions are exact index permutations of the carrier's flattened
coordinates (PermutationAction); finite toy sets that are not arrays use an
opaque callable (FunctionAction).
"""

from abc import ABC, abstractmethod
from typing import Any, Callable, Optional, Tuple

import numpy as np

from ..errors import CarrierMismatchError
from ..groups.core import FiniteGroup

CarrierShape = Optional[Tuple[int, ...]]


class GroupAction(ABC):
    """
    Abstract base class for every action of a finite group.

    Subclasses must guarantee transform[e] = identity and
    transform[a] ∘ transform[b] = transform[a·b]; verify_action checks both.
    """

    group: FiniteGroup
    carrier_shape: CarrierShape  # None for carriers that are not arrays

    @abstractmethod
    def apply(self, g: int, x: Any) -> Any:
        """Return g·x."""
        pass

    def permutation(self, g: int) -> Optional[np.ndarray]:
        """Flat index permutation realising g, when the action has one."""
        return None

    def describe(self) -> str:
        return f"{type(self).__name__}({self.group.name}, carrier={self.carrier_shape})"


class PermutationAction(GroupAction):
    """
    g·x is a gather: (g·x).flat[i] = x.flat[perms[g][i]].

    Inputs may carry leading batch dimensions in front of carrier_shape;
    each trailing carrier block is permuted independently.
    """

    def __init__(self, group: FiniteGroup, carrier_shape: Tuple[int, ...], perms: np.ndarray, label: str = "perm"):
        self.group = group
        self.carrier_shape = tuple(int(d) for d in carrier_shape)
        self.size = int(np.prod(self.carrier_shape, dtype=np.int64))
        perms = np.asarray(perms, dtype=np.int64)
        if perms.shape != (group.order, self.size):
            raise CarrierMismatchError(
                f"Expected permutations of shape {(group.order, self.size)}, got {perms.shape}"
            )
        if not np.array_equal(np.sort(perms, axis=1), np.broadcast_to(np.arange(self.size), perms.shape)):
            raise CarrierMismatchError("Every row of a permutation action must be a permutation")
        perms.setflags(write=False)
        self.perms = perms
        self.label = label

    def _check(self, x: np.ndarray) -> Tuple[int, ...]:
        k = len(self.carrier_shape)
        if x.ndim < k or tuple(x.shape[x.ndim - k:]) != self.carrier_shape:
            raise CarrierMismatchError(
                f"{self.label} action expects trailing shape {self.carrier_shape}, got {x.shape}"
            )
        return tuple(x.shape[: x.ndim - k])

    def apply(self, g: int, x: Any) -> np.ndarray:
        g = self.group.validate_element(g)
        x = np.asarray(x)
        lead = self._check(x)
        flat = x.reshape(*lead, self.size)
        return flat[..., self.perms[g]].reshape(x.shape)

    def apply_transpose(self, g: int, y: Any) -> np.ndarray:
        """Pull a gradient back through transform[g] (the inverse permutation)."""
        return self.apply(self.group.inverse(g), y)

    def permutation(self, g: int) -> np.ndarray:
        return self.perms[self.group.validate_element(g)]

    def describe(self) -> str:
        return f"{self.label}({self.group.name}, carrier={self.carrier_shape})"


class FunctionAction(GroupAction):
    """An action given by a callable fn(g, x); used for finite toy sets."""

    def __init__(
        self,
        group: FiniteGroup,
        fn: Callable[[int, Any], Any],
        carrier_shape: CarrierShape = None,
        label: str = "function",
    ):
        self.group = group
        self.fn = fn
        self.carrier_shape = carrier_shape
        self.label = label

    def apply(self, g: int, x: Any) -> Any:
        g = self.group.validate_element(g)
        if self.carrier_shape is not None:
            shape = tuple(np.shape(x))
            if shape[len(shape) - len(self.carrier_shape):] != tuple(self.carrier_shape):
                raise CarrierMismatchError(f"{self.label} action expects shape {self.carrier_shape}, got {shape}")
        return self.fn(g, x)

    def describe(self) -> str:
        return f"{self.label}({self.group.name})"


def is_fixed(A: GroupAction, g: int, x: Any) -> bool:
    """True when g·x equals x exactly."""
    y = A.apply(g, x)
    if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
        return bool(np.array_equal(y, x))
    return y == x
