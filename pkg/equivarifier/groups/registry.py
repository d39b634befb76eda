# equivarifier/groups/registry.py
"""
Resolution of group spec strings such as `cyclic:4`, `dihedral:3` or
`file:tables/c4.tbl`. Each family registers itself with a decorator.
"""

from typing import Callable, Dict, List

from ..errors import GroupFormatError, InvalidOrderError
from .core import FiniteGroup, cyclic_group, dihedral_group
from .serialization import read_group_table

GroupFactory = Callable[[str], FiniteGroup]


class GroupSpecRegistry:
    """
    Central registry of group families.
    Families register themselves via the `register_group_family` decorator.
    """
    def __init__(self):
        self._families: Dict[str, GroupFactory] = {}

    def register(self, prefix: str, factory: GroupFactory) -> GroupFactory:
        self._families[prefix] = factory
        return factory

    def families(self) -> List[str]:
        return sorted(self._families)

    def get(self, prefix: str) -> GroupFactory:
        return self._families.get(prefix)

    def parse(self, spec: str) -> FiniteGroup:
        prefix, sep, arg = spec.partition(":")
        factory = self.get(prefix.strip())
        if not sep or factory is None:
            raise GroupFormatError(
                f"Unrecognised group spec {spec!r}; expected one of "
                + ", ".join(f"{f}:<arg>" for f in self.families())
            )
        return factory(arg.strip())


# Global registry instance
registry = GroupSpecRegistry()


def register_group_family(prefix: str):
    """
    Decorator registering a factory for `prefix:<arg>` specs.

    Usage:
        @register_group_family("cyclic")
        def _cyclic(arg): ...
    """
    def decorator(factory: GroupFactory) -> GroupFactory:
        return registry.register(prefix, factory)
    return decorator


def _parse_order(arg: str) -> int:
    try:
        n = int(arg)
    except ValueError as e:
        raise GroupFormatError(f"Group parameter must be an integer, got {arg!r}") from e
    if n < 1:
        raise InvalidOrderError(f"Group parameter must be >= 1, got {n}")
    return n


@register_group_family("cyclic")
def _cyclic(arg: str) -> FiniteGroup:
    return cyclic_group(_parse_order(arg))


@register_group_family("dihedral")
def _dihedral(arg: str) -> FiniteGroup:
    return dihedral_group(_parse_order(arg))


@register_group_family("file")
def _from_file(arg: str) -> FiniteGroup:
    if not arg:
        raise GroupFormatError("file: spec needs a path")
    return read_group_table(arg)


def parse_group_spec(spec: str) -> FiniteGroup:
    return registry.parse(spec)
