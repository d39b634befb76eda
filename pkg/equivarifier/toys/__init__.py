from .base import LiftDemo, Toy
from .registry import ToyRegistry, register_toy, registry, run_toy
from . import builtin  # noqa: F401  registers the built-in toys

__all__ = ["LiftDemo", "Toy", "ToyRegistry", "register_toy", "registry", "run_toy"]
