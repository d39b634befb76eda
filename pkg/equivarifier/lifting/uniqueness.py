# equivarifier/lifting/uniqueness.py
"""
Brute-force uniqueness oracle for lifts on finite toy domains.

Enumerates every h: X → Z^{×G} over a finite codomain Z that satisfies

    h(x)_e        = F(x)                 (p ∘ h = F)
    h(g·x)_k      = h(x)_{idx(g⁻¹ g_k)}  (equivariance)

by backtracking over the unknowns h(x)_k. The lift theorem says exactly one
such h exists, namely lift(F).
"""

import logging
from collections import defaultdict
from typing import Any, Callable, Dict, Hashable, Iterator, List, Sequence, Tuple

from pydantic import BaseModel

from ..actions.base import GroupAction
from ..actions.builtin import source_components
from ..errors import CarrierMismatchError, WrongGroupError
from ..groups.core import FiniteGroup
from .lift import lift

logger = logging.getLogger(__name__)

Assignment = Dict[Hashable, Tuple[Any, ...]]


def _domain_index(domain: Sequence[Hashable]) -> Dict[Hashable, int]:
    index = {}
    for i, x in enumerate(domain):
        if x in index:
            raise CarrierMismatchError(f"Domain lists {x!r} twice")
        index[x] = i
    return index


def enumerate_constrained_lifts(
    F: Callable[[Any], Any],
    A: GroupAction,
    G: FiniteGroup,
    domain: Sequence[Hashable],
    codomain: Sequence[Any],
) -> Iterator[Assignment]:
    """
    Yield every map h (as {x: tuple of |G| values}) meeting both constraints.
    The domain must be closed under A.
    """
    if not G.same_table(A.group):
        raise WrongGroupError(f"Action is over {A.group.name}, not {G.name}")
    domain = list(domain)
    index = _domain_index(domain)
    n, e = G.order, G.identity

    # Unknown (i, k) is h(domain[i])_k, numbered i * n + k.
    fixed: Dict[int, Any] = {}
    links: Dict[int, List[int]] = defaultdict(list)
    for i, x in enumerate(domain):
        fixed[i * n + e] = F(x)
        for g in G.elements:
            gx = A.apply(g, x)
            if gx not in index:
                raise CarrierMismatchError(f"{g}·{x!r} = {gx!r} is outside the domain")
            j = index[gx]
            src = source_components(G, g)
            for k in G.elements:
                a, b = j * n + k, i * n + int(src[k])
                if a != b:
                    links[a].append(b)
                    links[b].append(a)

    total = len(domain) * n
    values: List[Any] = [None] * total
    assigned = [False] * total

    def consistent(v: int, z: Any) -> bool:
        if v in fixed and fixed[v] != z:
            return False
        return all(not assigned[w] or values[w] == z for w in links[v])

    def search(v: int) -> Iterator[Assignment]:
        if v == total:
            yield {x: tuple(values[i * n:(i + 1) * n]) for i, x in enumerate(domain)}
            return
        for z in codomain:
            if consistent(v, z):
                values[v], assigned[v] = z, True
                yield from search(v + 1)
                assigned[v] = False
        values[v] = None

    yield from search(0)


class UniquenessReport(BaseModel):
    solutions: int
    matches_lift: bool
    constructed: Dict[str, List[Any]]

    @property
    def unique(self) -> bool:
        return self.solutions == 1 and self.matches_lift


def verify_lift_uniqueness(
    F: Callable[[Any], Any],
    A: GroupAction,
    G: FiniteGroup,
    domain: Sequence[Hashable],
    codomain: Sequence[Any],
) -> UniquenessReport:
    """Compare every constraint-satisfying h with lift(F) on the whole domain."""
    F_hat = lift(F, A, G)
    constructed = {x: F_hat(x).as_tuple() for x in domain}
    solutions = list(enumerate_constrained_lifts(F, A, G, domain, codomain))
    matches = bool(solutions) and all(h == constructed for h in solutions)
    logger.debug(f"Uniqueness oracle on {len(domain)} points over {G.name}: {len(solutions)} solutions")
    return UniquenessReport(
        solutions=len(solutions),
        matches_lift=matches,
        constructed={repr(x): list(v) for x, v in constructed.items()},
    )
