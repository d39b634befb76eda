# equivarifier/__init__.py
"""
equivarifier package

Turns arbitrary maps and neural-network layers into maps that are exactly
equivariant under a finite group, by lifting them into the G-product, and
ships the rotated-MNIST experiment that exercises the construction end to end.
"""

# Package metadata
__version__ = "1.0.0"
__description__ = "Exact equivarification of neural networks over finite groups"

__all__ = [
    "__version__",
    "get_version",
    "get_package_info",
    "main",
]


def get_version():
    """
    Get the current version of the equivarifier package.

    Returns:
        str: The version string in format "major.minor.patch"
    """
    return __version__


def get_package_info():
    """
    Get package information.

    Returns:
        dict: Dictionary containing name, version and description
    """
    return {
        "version": __version__,
        "description": __description__,
        "name": "equivarifier",
    }


def main():
    """Run the CLI, as `python -m equivarifier` does."""
    from .cli import main as cli_main
    return cli_main()
