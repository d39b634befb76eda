# equivarifier/groups/serialization.py
"""
Plain-text Cayley tables.

    order 4
    0 1 2 3
    1 2 3 0
    ...

Reading does not check the group axioms: a corrupted table loads fine and
check_axioms then lists what is wrong with it.
"""

from pathlib import Path
from typing import Union

import numpy as np

from ..errors import GroupFormatError
from .core import FiniteGroup


def read_group_table(path: Union[str, Path]) -> FiniteGroup:
    path = Path(path)
    lines = [line.strip() for line in path.read_text(encoding="utf-8").splitlines()]
    lines = [line for line in lines if line and not line.startswith("#")]
    if not lines:
        raise GroupFormatError(f"{path}: empty group file")

    header = lines[0].split()
    if len(header) != 2 or header[0] != "order":
        raise GroupFormatError(f"{path}: first line must be 'order n', got {lines[0]!r}")
    try:
        n = int(header[1])
    except ValueError as e:
        raise GroupFormatError(f"{path}: order is not an integer: {header[1]!r}") from e
    if n < 1:
        raise GroupFormatError(f"{path}: order must be positive, got {n}")

    rows = lines[1:]
    if len(rows) != n:
        raise GroupFormatError(f"{path}: expected {n} table rows, found {len(rows)}")
    try:
        table = [[int(v) for v in row.split()] for row in rows]
    except ValueError as e:
        raise GroupFormatError(f"{path}: non-integer table entry") from e
    for i, row in enumerate(table):
        if len(row) != n:
            raise GroupFormatError(f"{path}: row {i} has {len(row)} entries, expected {n}")

    return FiniteGroup.from_table(table, name=path.stem)


def write_group_table(G: FiniteGroup, path: Union[str, Path]) -> Path:
    path = Path(path)
    body = "\n".join(" ".join(str(int(v)) for v in row) for row in np.asarray(G.table))
    path.write_text(f"order {G.order}\n{body}\n", encoding="utf-8")
    return path
