# equivarifier/actions/__init__.py
from .base import FunctionAction, GroupAction, PermutationAction, is_fixed
from .builtin import (
    action_through_quotient,
    block_shift_action,
    rot90_action,
    source_components,
    trivial_action,
)
from .verify import ActionReport, ActionViolation, verify_action


def apply(A: GroupAction, g: int, x):
    """Functional form of A.apply(g, x)."""
    return A.apply(g, x)


__all__ = [
    "ActionReport",
    "ActionViolation",
    "FunctionAction",
    "GroupAction",
    "PermutationAction",
    "action_through_quotient",
    "apply",
    "block_shift_action",
    "is_fixed",
    "rot90_action",
    "source_components",
    "trivial_action",
    "verify_action",
]
