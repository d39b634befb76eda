# equivarifier/lifting/__init__.py
from .gproduct import (
    EquivariantMap,
    GProductAction,
    GProductValue,
    project,
    split_components,
    stack_components,
)
from .lift import (
    EquivarianceReport,
    check_equivariance,
    descended_action,
    equivariance_report,
    lift,
    lift_through_quotient,
    universal_map,
)
from .layerwise import (
    compose_equivariant,
    equivarify_chain,
    equivarify_layer,
    identity_map,
    precompose_projection,
)
from .uniqueness import UniquenessReport, enumerate_constrained_lifts, verify_lift_uniqueness

__all__ = [
    "EquivarianceReport",
    "EquivariantMap",
    "GProductAction",
    "GProductValue",
    "UniquenessReport",
    "check_equivariance",
    "compose_equivariant",
    "descended_action",
    "enumerate_constrained_lifts",
    "equivariance_report",
    "equivarify_chain",
    "equivarify_layer",
    "identity_map",
    "lift",
    "lift_through_quotient",
    "precompose_projection",
    "project",
    "split_components",
    "stack_components",
    "universal_map",
    "verify_lift_uniqueness",
]
