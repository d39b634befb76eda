# equivarifier/toys/builtin.py
from typing import Any, Sequence

from ..actions.base import FunctionAction, GroupAction
from ..groups.core import FiniteGroup, cyclic_group, dihedral_group
from .base import Toy
from .registry import register_toy


@register_toy
class TranslationToy(Toy):
    name = "translation"
    description = "C4 on Z/4 by k·x = x + k, F(x) = x; lift(F)(0) = (0, 3, 2, 1)"

    def group(self) -> FiniteGroup:
        return cyclic_group(4)

    def action(self, G: FiniteGroup) -> GroupAction:
        return FunctionAction(G, lambda k, x: (x + k) % 4, label="translate")

    def domain(self) -> Sequence[Any]:
        return range(4)

    def codomain(self) -> Sequence[Any]:
        return range(4)

    def base_map(self, x: Any) -> Any:
        return int(x)


@register_toy
class ConstantToy(Toy):
    name = "constant"
    description = "C4 on Z/4 by translation, F constant 1; every component equals 1"

    def group(self) -> FiniteGroup:
        return cyclic_group(4)

    def action(self, G: FiniteGroup) -> GroupAction:
        return FunctionAction(G, lambda k, x: (x + k) % 4, label="translate")

    def domain(self) -> Sequence[Any]:
        return range(4)

    def codomain(self) -> Sequence[Any]:
        return (0, 1)

    def base_map(self, x: Any) -> Any:
        return 1


@register_toy
class QuotientToy(Toy):
    name = "quotient"
    description = "C4 swapping {a, b} through odd powers; kernel {e, g^2}, so the lift has 2 components"
    through_quotient = True

    def group(self) -> FiniteGroup:
        return cyclic_group(4)

    def action(self, G: FiniteGroup) -> GroupAction:
        swap = {"a": "b", "b": "a"}
        return FunctionAction(G, lambda k, x: swap[x] if k % 2 else x, label="swap")

    def domain(self) -> Sequence[Any]:
        return ("a", "b")

    def codomain(self) -> Sequence[Any]:
        return (0, 1)

    def base_map(self, x: Any) -> Any:
        return 0 if x == "a" else 1


@register_toy
class DihedralToy(Toy):
    name = "dihedral"
    description = "D3 on the vertices of a triangle, F marks vertex 0"

    def group(self) -> FiniteGroup:
        return dihedral_group(3)

    def action(self, G: FiniteGroup) -> GroupAction:
        # r^i f^s · x = i + (-1)^s x mod 3
        def act(g: int, x: int) -> int:
            s, i = divmod(g, 3)
            return (i + (-x if s else x)) % 3
        return FunctionAction(G, act, label="vertices")

    def domain(self) -> Sequence[Any]:
        return range(3)

    def codomain(self) -> Sequence[Any]:
        return (0, 1)

    def base_map(self, x: Any) -> Any:
        return int(x == 0)
