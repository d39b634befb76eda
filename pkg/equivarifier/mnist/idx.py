# equivarifier/mnist/idx.py
"""
IDX reader and writer (the MNIST distribution format).

Header: uint32 big-endian magic 0x0000 08 dd (08 = unsigned byte,
dd = number of dimensions), then dd uint32 big-endian sizes, then the raw
bytes. Images are magic 2051 (3 dims), labels 2049 (1 dim). Files ending
in .gz are decompressed transparently.
"""

import gzip
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Tuple, Union

import numpy as np

from ..errors import DataConsistencyError, DataFormatError, DataIOError

logger = logging.getLogger(__name__)

IMAGES_MAGIC = 2051
LABELS_MAGIC = 2049
_UBYTE = 0x08

PathLike = Union[str, Path]


def _read_bytes(path: Path) -> bytes:
    if not path.exists():
        raise DataIOError(f"Data file not found: {path}")
    try:
        if path.suffix == ".gz":
            with gzip.open(path, "rb") as f:
                return f.read()
        return path.read_bytes()
    except (OSError, EOFError) as e:
        raise DataIOError(f"Could not read {path}: {e}") from e


def read_idx_array(path: PathLike, expected_magic: int = None) -> np.ndarray:
    """Raw uint8 array with the shape recorded in the header."""
    path = Path(path)
    data = _read_bytes(path)
    if len(data) < 4:
        raise DataIOError(f"{path}: truncated before the magic number")
    magic = int(np.frombuffer(data, dtype=">u4", count=1)[0])
    if expected_magic is not None and magic != expected_magic:
        raise DataFormatError(f"{path}: magic {magic}, expected {expected_magic}")
    if magic >> 16 != 0 or (magic >> 8) & 0xFF != _UBYTE:
        raise DataFormatError(f"{path}: magic {magic:#010x} is not an unsigned-byte IDX file")
    ndim = magic & 0xFF
    header_len = 4 + 4 * ndim
    if len(data) < header_len:
        raise DataIOError(f"{path}: truncated inside the header")
    shape = tuple(int(d) for d in np.frombuffer(data, dtype=">u4", count=ndim, offset=4))
    count = int(np.prod(shape, dtype=np.int64))
    if len(data) < header_len + count:
        raise DataIOError(f"{path}: expected {count} data bytes, found {len(data) - header_len}")
    return np.frombuffer(data, dtype=np.uint8, count=count, offset=header_len).reshape(shape)


def write_idx(path: PathLike, array: np.ndarray) -> Path:
    """Write a uint8 array as IDX (gzip-compressed when the name ends in .gz)."""
    path = Path(path)
    arr = np.asarray(array)
    if arr.dtype != np.uint8:
        raise DataFormatError(f"IDX writer takes uint8 arrays, got {arr.dtype}")
    magic = (_UBYTE << 8) | arr.ndim
    header = np.array([magic, *arr.shape], dtype=">u4").tobytes()
    payload = header + np.ascontiguousarray(arr).tobytes()
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix == ".gz":
        with gzip.open(path, "wb") as f:
            f.write(payload)
    else:
        path.write_bytes(payload)
    return path


@dataclass(frozen=True)
class MnistSamples:
    """Images as N×28×28×1 float32 in [0, 1] with their digits."""

    images: np.ndarray
    digits: np.ndarray

    def __len__(self) -> int:
        return int(self.digits.shape[0])

    def __getitem__(self, i: int) -> Tuple[np.ndarray, int]:
        return self.images[i], int(self.digits[i])

    def __iter__(self) -> Iterator[Tuple[np.ndarray, int]]:
        for i in range(len(self)):
            yield self[i]

    def head(self, count: int) -> "MnistSamples":
        return MnistSamples(self.images[:count], self.digits[:count])


def load_idx(images_path: PathLike, labels_path: PathLike) -> MnistSamples:
    raw_images = read_idx_array(images_path, IMAGES_MAGIC)
    raw_labels = read_idx_array(labels_path, LABELS_MAGIC)
    if raw_images.shape[0] != raw_labels.shape[0]:
        raise DataConsistencyError(
            f"{images_path} holds {raw_images.shape[0]} images but {labels_path} holds {raw_labels.shape[0]} labels"
        )
    if raw_labels.size and raw_labels.max() > 9:
        raise DataFormatError(f"{labels_path}: label {raw_labels.max()} is not a digit")
    images = (raw_images.astype(np.float32) / np.float32(255.0))[..., None]
    logger.info(f"✅ Loaded {len(raw_labels)} samples from {Path(images_path).name}")
    return MnistSamples(images, raw_labels.astype(np.int64))


# Standard file names, with or without .gz
MNIST_FILES = {
    "train": ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
    "test": ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"),
}


def locate_split(data_dir: PathLike, split: str) -> Tuple[Path, Path]:
    """Find the image/label files of a split, preferring uncompressed ones."""
    data_dir = Path(data_dir)
    found = []
    for stem in MNIST_FILES[split]:
        for candidate in (data_dir / stem, data_dir / f"{stem}.gz"):
            if candidate.exists():
                found.append(candidate)
                break
        else:
            raise DataIOError(f"{stem} not found in {data_dir}")
    return found[0], found[1]


def load_split(data_dir: PathLike, split: str, count: int = None) -> MnistSamples:
    samples = load_idx(*locate_split(data_dir, split))
    return samples.head(count) if count is not None else samples
