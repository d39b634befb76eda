import logging
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Union

from pydantic import ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from .errors import ConfigError

logger = logging.getLogger(__name__)

RotationPolicyName = Literal["none", "random"]


class EquivSettings(BaseSettings):
    """
    Centralized configuration for equivarifier.
    Reads from environment variables, .env file, and defaults.
    """
    # Network shape (conv1: 1->c1, conv2: 4*c1->c2, conv3: 4*c2->c3)
    c1: int = 8
    c2: int = 8
    c3: int = 16
    kernel: int = 5
    pool: int = 4

    # Optimisation
    lr: float = 0.05
    batch: int = 32
    epochs: int = 5
    seed: int = 0
    dtype: Literal["float32", "float64"] = "float32"

    # Data (desk scale)
    train_count: int = 10000
    test_count: int = 2000
    rotate_train: RotationPolicyName = "none"
    rotate_test: RotationPolicyName = "random"

    # Opt-in full-scale run
    full_train_count: int = 60000
    full_test_count: int = 10000
    full_epochs: int = 15

    # Paths
    data_dir: Path = Path("data")
    checkpoint_dir: Path = Path("checkpoints")

    # Worker threads for evaluation (batches only, results kept in order)
    threads: int = 1

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="EQUIV_",  # e.g. EQUIV_DATA_DIR=/datasets/mnist
        extra="ignore",
    )


# Keys accepted in a key-value config file
CONFIG_FILE_KEYS = frozenset(EquivSettings.model_fields.keys())


def load_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """
    Parse a `key = value` config file.

    Blank lines and `#` comments are skipped. Values stay strings; pydantic
    converts them when the settings object is built.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")

    values: Dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_FILE_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown config key '{key}'")
        values[key] = value
    return values


def resolve_settings(
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> EquivSettings:
    """
    Build settings with precedence: overrides > config file > env > defaults.

    None-valued overrides are ignored so unset CLI flags fall through.
    """
    merged: Dict[str, Any] = {}
    if config_path is not None:
        merged.update(load_config_file(config_path))
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    try:
        resolved = EquivSettings(**merged)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e}") from e
    logger.debug(f"Resolved settings from {config_path or 'environment'}")
    return resolved


# Instantiate global settings object
settings = EquivSettings()
