# equivarifier/groups/subgroups.py
"""
Subgroups, kernels of actions, and quotient groups.

A kernel is computed from caller-supplied probe values: the library cannot
check "gx = x for every x" on an infinite carrier. For permutation actions on
a finite carrier, one probe whose entries are pairwise distinct is enough,
since any non-identity permutation moves some distinct entry.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from ..errors import (
    InsufficientProbeError,
    InvalidSubgroupError,
    NotNormalError,
    WrongGroupError,
)
from .core import FiniteGroup

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    members: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, a: int) -> bool:
        return int(a) in self.members

    @property
    def is_trivial(self) -> bool:
        return self.members == (self.parent.identity,)


def make_subgroup(G: FiniteGroup, members: Iterable[int]) -> Subgroup:
    """Validate a member set and wrap it as a Subgroup."""
    member_set = {G.validate_element(m) for m in members}
    if G.identity not in member_set:
        raise InvalidSubgroupError(f"Subgroup of {G.name} must contain the identity")
    for a in member_set:
        if G.inverses[a] not in member_set:
            raise InvalidSubgroupError(f"Subgroup of {G.name} is not closed under inverses (element {a})")
        for b in member_set:
            if int(G.table[a, b]) not in member_set:
                raise InvalidSubgroupError(f"Subgroup of {G.name} is not closed: {a}·{b} = {G.table[a, b]}")
    return Subgroup(G, tuple(sorted(member_set)))


def is_normal(N: Subgroup) -> bool:
    """Exhaustive check that g·n·g⁻¹ ∈ N for all g in G and n in N."""
    G = N.parent
    T = G.table
    members = set(N.members)
    for g in G.elements:
        g_inv = G.inverses[g]
        for n in N.members:
            if int(T[T[g, n], g_inv]) not in members:
                return False
    return True


def cosets(G: FiniteGroup, N: Subgroup) -> List[Tuple[int, ...]]:
    """
    Left cosets gN, identity coset first, then by smallest unassigned element.
    Each coset is a sorted tuple; its first entry is used as representative.
    """
    if not G.same_table(N.parent):
        raise WrongGroupError(f"Subgroup belongs to {N.parent.name}, not {G.name}")
    seen = set()
    result: List[Tuple[int, ...]] = []
    for g in [G.identity, *G.elements]:
        if g in seen:
            continue
        coset = tuple(sorted({int(G.table[g, n]) for n in N.members}))
        seen.update(coset)
        result.append(coset)
    return result


@dataclass(frozen=True, eq=False)
class QuotientGroup:
    """G/N with its own Cayley table and the projection G → G/N."""
    group: FiniteGroup
    projection: np.ndarray
    parent: FiniteGroup
    kernel: Subgroup
    representatives: Tuple[int, ...]

    def __post_init__(self):
        self.projection.setflags(write=False)

    def project(self, g: int) -> int:
        return int(self.projection[self.parent.validate_element(g)])


def quotient_group(G: FiniteGroup, N: Subgroup) -> QuotientGroup:
    """Form G/N; N must be a normal subgroup of G."""
    if not G.same_table(N.parent):
        raise WrongGroupError(f"Subgroup belongs to {N.parent.name}, not {G.name}")
    # Re-validate: a Subgroup can be built directly without make_subgroup.
    make_subgroup(G, N.members)
    if not is_normal(N):
        raise NotNormalError(f"{list(N.members)} is not normal in {G.name}")

    classes = cosets(G, N)
    projection = np.empty(G.order, dtype=np.int64)
    for index, coset in enumerate(classes):
        projection[list(coset)] = index
    reps = tuple(coset[0] for coset in classes)

    m = len(classes)
    table = np.empty((m, m), dtype=np.int64)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            table[i, j] = projection[G.table[a, b]]

    names = [G.element_names[r] + "N" if r != G.identity else "N" for r in reps]
    Q = FiniteGroup.from_table(table, names, name=f"{G.name}/N{N.order}")
    logger.debug(f"Quotient {Q.name}: {G.order} / {N.order} = {Q.order}")
    return QuotientGroup(Q, projection, G, N, reps)


def is_homomorphism(quotient: QuotientGroup) -> bool:
    """projection(a·b) == projection(a)·projection(b) for every pair."""
    G, Q, p = quotient.parent, quotient.group, quotient.projection
    lhs = p[G.table]
    rhs = Q.table[p[:, None], p[None, :]]
    return bool(np.array_equal(lhs, rhs))


def kernel_of_action(G: FiniteGroup, A, probes: Sequence) -> Subgroup:
    """
    Elements of G that fix every probe value under A.

    The result is a subgroup whenever A is a genuine action; it is
    re-validated (closure and normality) before being returned.
    """
    from ..actions.base import is_fixed

    if not G.same_table(A.group):
        raise WrongGroupError(f"Action is over {A.group.name}, not {G.name}")
    probes = list(probes)
    if not probes:
        raise InsufficientProbeError("kernel_of_action needs at least one probe value")

    members = [g for g in G.elements if all(is_fixed(A, g, x) for x in probes)]
    N = make_subgroup(G, members)
    if not is_normal(N):
        raise NotNormalError(f"Fixed-point set {members} is not normal; the action laws do not hold")
    logger.debug(f"Kernel of action on {G.name} from {len(probes)} probes: {list(N.members)}")
    return N
