# equivarifier/cli_helper.py
"""
Plumbing shared by the CLI commands: resolving settings, locating data and
checkpoints, and turning library errors into exit codes.
"""

import logging
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, Optional

import numpy as np
import typer
from pydantic import BaseModel

from .errors import CheckpointError, DataIOError, EquivarifierError, TrainingError
from .mnist.dataset import LabeledDataset, prepare_dataset
from .mnist.idx import load_split
from .mnist.network import ModelConfig, build_model
from .nn.checkpoint import load_checkpoint, read_checkpoint
from .nn.model import Model
from .settings import EquivSettings, resolve_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


class CommandConfig(BaseModel):
    """What a command ran with; logged at the start of every command."""
    command: str
    flags: Dict[str, Any]
    config_file: Optional[str] = None
    seed: int
    settings: Dict[str, Any]


class GlobalOptions(BaseModel):
    config: Optional[Path] = None
    seed: Optional[int] = None
    threads: Optional[int] = None
    csv: bool = False
    verbose: bool = False


def configure_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def resolve_command(command: str, options: GlobalOptions, **flags: Any) -> EquivSettings:
    """Merge global options and command flags over the config file and environment, then log the result."""
    overrides = {"seed": options.seed, "threads": options.threads}
    overrides.update({k: v for k, v in flags.items() if k in EquivSettings.model_fields})
    resolved = resolve_settings(options.config, overrides)
    record = CommandConfig(
        command=command,
        flags={k: v for k, v in flags.items() if v is not None},
        config_file=str(options.config) if options.config else None,
        seed=resolved.seed,
        settings=resolved.model_dump(mode="json"),
    )
    logger.info(f"🚀 {command}: {record.model_dump_json()}")
    return resolved


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, TrainingError):
        return EXIT_FAILED
    if isinstance(error, (DataIOError, CheckpointError, OSError)):
        return EXIT_IO
    if isinstance(error, (EquivarifierError, ValueError)):
        return EXIT_USAGE
    return EXIT_FAILED


@contextmanager
def command_errors() -> Iterator[None]:
    """Report library errors on stderr and exit with the matching code."""
    try:
        yield
    except typer.Exit:
        raise
    except (EquivarifierError, OSError, ValueError) as e:
        code = exit_code_for(e)
        logger.debug("Command failed", exc_info=True)
        typer.echo(f"❌ Error: {e}", err=True)
        last = getattr(e, "last_checkpoint", None)
        if last is not None:
            typer.echo(f"   Last good checkpoint: {last}", err=True)
        raise typer.Exit(code=code)


def data_dir(settings: EquivSettings) -> Path:
    """The MNIST directory; EQUIV_DATA_DIR wins over the config file."""
    path = Path(os.environ.get("EQUIV_DATA_DIR", settings.data_dir))
    if not path.is_dir():
        raise DataIOError(f"MNIST directory not found: {path} (set EQUIV_DATA_DIR)")
    return path


def load_dataset(settings: EquivSettings, split: str, count: int, rotate: str) -> LabeledDataset:
    samples = load_split(data_dir(settings), split, count)
    return prepare_dataset(samples, rotate=rotate, seed=settings.seed)


def dtype_of(settings: EquivSettings):
    return np.float64 if settings.dtype == "float64" else np.float32


def model_from_settings(settings: EquivSettings, dtype=None) -> Model:
    return build_model(ModelConfig.from_settings(settings), dtype=dtype or dtype_of(settings))


def model_from_checkpoint(path: Path, dtype=np.float64) -> Model:
    """Rebuild the network recorded in a checkpoint header and load its weights."""
    header, _ = read_checkpoint(path)
    config = header.get("config")
    if not isinstance(config, dict):
        raise CheckpointError(f"{path}: header has no model configuration")
    model = build_model(ModelConfig.build(**config), dtype=dtype)
    load_checkpoint(path, model)
    return model
