# equivarifier/toys/registry.py
from typing import Dict, List, Type

from ..errors import ConfigError
from .base import LiftDemo, Toy


class ToyRegistry:
    """
    Central registry for the built-in lift demonstrations.
    Toys register themselves via the `register_toy` decorator.
    """
    def __init__(self):
        self._toys: Dict[str, Toy] = {}

    def register(self, toy_cls: Type[Toy]):
        toy = toy_cls()
        self._toys[toy.name] = toy
        return toy_cls

    def get_toys(self) -> List[Toy]:
        return list(self._toys.values())

    def get_toy(self, name: str) -> Toy:
        toy = self._toys.get(name)
        if toy is None:
            raise ConfigError(f"Unknown toy {name!r}; available: {', '.join(sorted(self._toys))}")
        return toy


# Global registry instance
registry = ToyRegistry()


def register_toy(cls):
    """
    Decorator to register a toy class.

    Usage:
        @register_toy
        class MyToy(Toy):
            ...
    """
    registry.register(cls)
    return cls


def run_toy(name: str) -> LiftDemo:
    return registry.get_toy(name).run()
