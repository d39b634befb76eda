# equivarifier/nn/checkpoint.py
"""
Binary checkpoints.

Layout (all integers little-endian):

    offset 0   8 bytes   magic b"EQVCKPT\\0"
    offset 8   uint32    format version (1)
    offset 12  uint32    header length L in bytes
    offset 16  L bytes   UTF-8 JSON header:
                         {"format_version", "seed", "config",
                          "parameters": [{"name", "shape"}, ...]}
    then       per parameter, in header order: raw float32 ('<f4'), row-major

The header holds no timestamp, so the same model and seed always produce
the same bytes. Writes go to a temp file that replaces the target under a
file lock.
"""

import json
import logging
import struct
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from filelock import FileLock
from pydantic import BaseModel, NonNegativeInt, ValidationError

from ..errors import CheckpointError
from .model import Model

logger = logging.getLogger(__name__)

MAGIC = b"EQVCKPT\x00"
FORMAT_VERSION = 1
_PREFIX = struct.Struct("<8sII")
_DTYPE = np.dtype("<f4")


class ParameterEntry(BaseModel):
    name: str
    shape: List[NonNegativeInt]


class CheckpointHeader(BaseModel):
    format_version: int
    seed: int
    config: Optional[Dict[str, Any]] = None
    parameters: List[ParameterEntry]


def _lock_for(path: Path) -> FileLock:
    return FileLock(str(path.with_name(path.name + ".lock")))


def save_checkpoint(
    model: Model,
    path: Union[str, Path],
    seed: int,
    config: Optional[Dict[str, Any]] = None,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    params = model.parameters()
    header = {
        "format_version": FORMAT_VERSION,
        "seed": int(seed),
        "config": config if config is not None else model.config,
        "parameters": [{"name": name, "shape": list(p.shape)} for name, p in params.items()],
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")

    with _lock_for(path):
        temp = path.with_suffix(path.suffix + ".tmp")
        with open(temp, "wb") as f:
            f.write(_PREFIX.pack(MAGIC, FORMAT_VERSION, len(header_bytes)))
            f.write(header_bytes)
            for p in params.values():
                f.write(np.ascontiguousarray(p, dtype=_DTYPE).tobytes())
        temp.replace(path)
    logger.info(f"💾 Saved checkpoint {path} ({model.num_parameters} parameters)")
    return path


def read_checkpoint(path: Union[str, Path]) -> Tuple[Dict[str, Any], Dict[str, np.ndarray]]:
    """Return (header, parameters) without needing a model."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Checkpoint not found: {path}")
    with _lock_for(path):
        data = path.read_bytes()

    if len(data) < _PREFIX.size:
        raise CheckpointError(f"{path}: file too short for a checkpoint")
    magic, version, header_len = _PREFIX.unpack_from(data)
    if magic != MAGIC:
        raise CheckpointError(f"{path}: not an equivarifier checkpoint")
    if version != FORMAT_VERSION:
        raise CheckpointError(f"{path}: unsupported format version {version}")
    start = _PREFIX.size
    try:
        header = json.loads(data[start:start + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointError(f"{path}: corrupt header") from e
    try:
        entries = CheckpointHeader.model_validate(header).parameters
    except ValidationError as e:
        raise CheckpointError(f"{path}: malformed header: {e.error_count()} problem(s)") from e

    offset = start + header_len
    params: Dict[str, np.ndarray] = {}
    for entry in entries:
        shape = tuple(entry.shape)
        count = int(np.prod(shape, dtype=np.int64))
        end = offset + count * _DTYPE.itemsize
        if end > len(data):
            raise CheckpointError(f"{path}: truncated while reading {entry.name}")
        params[entry.name] = np.frombuffer(data, dtype=_DTYPE, count=count, offset=offset).reshape(shape)
        offset = end
    if offset != len(data):
        raise CheckpointError(f"{path}: {len(data) - offset} trailing bytes")
    return header, params


def load_checkpoint(path: Union[str, Path], model: Model) -> Dict[str, Any]:
    """Copy checkpoint parameters into `model` (registry must match); return the header."""
    header, params = read_checkpoint(path)
    expected = {name: p.shape for name, p in model.parameters().items()}
    found = {name: p.shape for name, p in params.items()}
    if expected != found:
        raise CheckpointError(f"{path}: parameter registry does not match the model")
    model.set_parameters(params)
    logger.info(f"✅ Loaded checkpoint {path} (seed {header.get('seed')})")
    return header
