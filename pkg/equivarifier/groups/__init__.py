# equivarifier/groups/__init__.py
from .core import (
    AxiomReport,
    FiniteGroup,
    GroupInfo,
    Violation,
    check_axioms,
    compose,
    cyclic_group,
    describe_group,
    dihedral_group,
    element_order,
)
from .subgroups import (
    QuotientGroup,
    Subgroup,
    cosets,
    is_homomorphism,
    is_normal,
    kernel_of_action,
    make_subgroup,
    quotient_group,
)
from .serialization import read_group_table, write_group_table
from .registry import parse_group_spec, register_group_family

__all__ = [
    "AxiomReport",
    "FiniteGroup",
    "GroupInfo",
    "QuotientGroup",
    "Subgroup",
    "Violation",
    "check_axioms",
    "compose",
    "cosets",
    "cyclic_group",
    "describe_group",
    "dihedral_group",
    "element_order",
    "is_homomorphism",
    "is_normal",
    "kernel_of_action",
    "make_subgroup",
    "parse_group_spec",
    "quotient_group",
    "read_group_table",
    "register_group_family",
    "write_group_table",
]
