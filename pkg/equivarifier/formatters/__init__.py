# equivarifier/formatters/__init__.py
from .registry import FormatterRegistry, get_registry
from .groups import GroupFormatter
from .lifting import LiftDemoFormatter
from .mnist import MnistFormatter

# Initialize Registry
FormatterRegistry.register(GroupFormatter())
FormatterRegistry.register(LiftDemoFormatter())
FormatterRegistry.register(MnistFormatter())

__all__ = ["FormatterRegistry", "get_registry"]
