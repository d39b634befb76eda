# equivarifier/groups/core.py
"""
Finite groups as explicit Cayley tables.

Elements are dense indices 0..n-1 and the table is the single source of
truth: table[a, b] is the index of a·b. Everything else (identity, inverses)
is derived from it, which keeps every group law exhaustively checkable.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from ..errors import InvalidElementError, InvalidOrderError

logger = logging.getLogger(__name__)

# Above this order the associativity scan samples triples instead.
EXHAUSTIVE_AXIOM_LIMIT = 64
SAMPLED_TRIPLES = 10_000
# Reports keep the first few violations of each law, and a total count.
MAX_REPORTED_VIOLATIONS = 20


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """
    A finite group given by its multiplication table.

    `inverses[a]` is -1 and `identity` is -1 when the table has no such
    element; check_axioms reports that instead of the constructor raising,
    so corrupted tables can still be inspected.
    """
    table: np.ndarray
    identity: int
    inverses: Tuple[int, ...]
    element_names: Tuple[str, ...]
    name: str = "group"
    _index: range = field(init=False, repr=False)

    def __post_init__(self):
        self.table.setflags(write=False)
        object.__setattr__(self, "_index", range(self.table.shape[0]))

    @classmethod
    def from_table(
        cls,
        table: Sequence[Sequence[int]],
        names: Optional[Sequence[str]] = None,
        name: str = "group",
    ) -> "FiniteGroup":
        """Build a group from a square table, deriving identity and inverses."""
        arr = np.array(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise InvalidOrderError(f"Cayley table must be a non-empty square array, got shape {arr.shape}")
        n = arr.shape[0]
        ids = np.arange(n)

        identity = -1
        for e in range(n):
            if np.array_equal(arr[e], ids) and np.array_equal(arr[:, e], ids):
                identity = e
                break

        inverses: List[int] = []
        for a in range(n):
            inv = -1
            if identity >= 0:
                for b in range(n):
                    if arr[a, b] == identity and arr[b, a] == identity:
                        inv = b
                        break
            inverses.append(inv)

        if names is None:
            names = [str(i) for i in range(n)]
        if len(names) != n:
            raise InvalidOrderError(f"Expected {n} element names, got {len(names)}")
        return cls(arr, identity, tuple(inverses), tuple(names), name)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    @property
    def elements(self) -> range:
        return self._index

    def validate_element(self, a: int) -> int:
        if not isinstance(a, (int, np.integer)) or not 0 <= int(a) < self.order:
            raise InvalidElementError(f"Element {a!r} is not in [0, {self.order}) for {self.name}")
        return int(a)

    def inverse(self, a: int) -> int:
        return self.inverses[self.validate_element(a)]

    def power(self, a: int, k: int) -> int:
        """a^k for any integer k (negative powers use the inverse)."""
        a = self.validate_element(a)
        if k < 0:
            a, k = self.inverses[a], -k
        result = self.identity
        for _ in range(k):
            result = int(self.table[result, a])
        return result

    def same_table(self, other: "FiniteGroup") -> bool:
        return self is other or np.array_equal(self.table, other.table)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"


def compose(G: FiniteGroup, a: int, b: int) -> int:
    """Return the index of a·b."""
    a = G.validate_element(a)
    b = G.validate_element(b)
    return int(G.table[a, b])


def element_order(G: FiniteGroup, a: int) -> int:
    a = G.validate_element(a)
    k, x = 1, a
    while x != G.identity:
        x = int(G.table[x, a])
        k += 1
        if k > G.order:
            raise InvalidElementError(f"Element {a} never returns to the identity")
    return k


def cyclic_group(n: int) -> FiniteGroup:
    """
    Z/nZ with index k standing for g^k.

    Index 0 is the identity and index 1 the generator g, which fixes the
    tuple order (e, g, g^2, ...) used by the G-product identification.
    """
    if n < 1:
        raise InvalidOrderError(f"Cyclic group order must be >= 1, got {n}")
    ids = np.arange(n)
    table = (ids[:, None] + ids[None, :]) % n
    names = ["e"] + ["g" if k == 1 else f"g^{k}" for k in range(1, n)]
    return FiniteGroup.from_table(table, names, name=f"C{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """
    Symmetries of the regular n-gon, order 2n.

    Index s*n + i stands for r^i f^s. Products follow
    r^i f^s · r^j f^t = r^(i + (-1)^s j) f^(s+t), so f·r·f = r^-1.
    """
    if n < 1:
        raise InvalidOrderError(f"Dihedral group parameter must be >= 1, got {n}")
    order = 2 * n
    table = np.empty((order, order), dtype=np.int64)
    for (s, i), (t, j) in product(product(range(2), range(n)), repeat=2):
        rot = (i + (j if s == 0 else -j)) % n
        table[s * n + i, t * n + j] = ((s + t) % 2) * n + rot

    def _name(s: int, i: int) -> str:
        r = "" if i == 0 else ("r" if i == 1 else f"r^{i}")
        if s == 0:
            return r or "e"
        return f"{r}f"

    names = [_name(s, i) for s in range(2) for i in range(n)]
    return FiniteGroup.from_table(table, names, name=f"D{n}")


class Violation(BaseModel):
    law: str  # closure, identity, inverse, associativity
    elements: List[int]
    detail: str


class AxiomReport(BaseModel):
    group: str
    order: int
    exhaustive: bool
    violations: List[Violation] = []
    violation_count: int = 0

    @property
    def ok(self) -> bool:
        return self.violation_count == 0


def check_axioms(G: FiniteGroup, seed: int = 0) -> AxiomReport:
    """
    Verify closure, identity, inverses (existence and uniqueness) and
    associativity. Violations are returned, never raised.

    Associativity is exhaustive up to EXHAUSTIVE_AXIOM_LIMIT elements and
    sampled (SAMPLED_TRIPLES seeded triples) beyond.
    """
    n = G.order
    T = G.table
    exhaustive = n <= EXHAUSTIVE_AXIOM_LIMIT
    report = AxiomReport(group=G.name, order=n, exhaustive=exhaustive)

    def flag(law: str, elements, detail: str):
        report.violation_count += 1
        if len(report.violations) < MAX_REPORTED_VIOLATIONS:
            report.violations.append(Violation(law=law, elements=[int(e) for e in elements], detail=detail))

    bad = np.argwhere((T < 0) | (T >= n))
    for a, b in bad:
        flag("closure", (a, b), f"table[{a}][{b}] = {T[a, b]} is outside [0, {n})")
    if len(bad):
        # Indexing with out-of-range entries is meaningless; stop at closure.
        return report

    e = G.identity
    if e < 0:
        flag("identity", [], "no element acts as a two-sided identity")
        return report

    for a in range(n):
        solutions = np.flatnonzero(T[a] == e)
        two_sided = [b for b in solutions if T[b, a] == e]
        if not two_sided:
            flag("inverse", (a,), f"element {a} has no two-sided inverse")
        elif len(solutions) != 1:
            flag("inverse", [a, *solutions], f"element {a} has {len(solutions)} right inverses")

    if exhaustive:
        ids = np.arange(n)
        left = T[T]  # left[a, b, c] = (a·b)·c
        right = T[ids[:, None, None], T[None, :, :]]  # right[a, b, c] = a·(b·c)
        for a, b, c in np.argwhere(left != right):
            flag("associativity", (a, b, c), f"({a}·{b})·{c} = {left[a, b, c]} but {a}·({b}·{c}) = {right[a, b, c]}")
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, SAMPLED_TRIPLES))
        left = T[T[a, b], c]
        right = T[a, T[b, c]]
        for k in np.flatnonzero(left != right):
            flag("associativity", (a[k], b[k], c[k]), "sampled triple is not associative")

    if report.ok:
        logger.debug(f"✅ {G.name}: all group axioms hold (exhaustive={exhaustive})")
    else:
        logger.debug(f"⚠️ {G.name}: {report.violation_count} axiom violations")
    return report


class GroupInfo(BaseModel):
    """Everything `group-info` prints about a group."""
    name: str
    order: int
    element_names: List[str]
    table: List[List[int]]
    identity: int
    inverses: List[int]
    axioms: AxiomReport


def describe_group(G: FiniteGroup, seed: int = 0) -> GroupInfo:
    return GroupInfo(
        name=G.name,
        order=G.order,
        element_names=list(G.element_names),
        table=G.table.tolist(),
        identity=int(G.identity),
        inverses=[int(i) for i in G.inverses],
        axioms=check_axioms(G, seed),
    )
