# equivarifier/toys/base.py
"""
Base class for the built-in finite lift demonstrations.

A toy is a finite G-set X, a map F: X → Z into a finite set and, optionally,
a quotient to lift through. Running it lifts F, tabulates every component,
measures equivariance on all of X and asks the brute-force oracle whether
the lift is the only constraint-satisfying map.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel

from ..actions.base import GroupAction
from ..groups.core import FiniteGroup
from ..groups.subgroups import QuotientGroup, kernel_of_action, quotient_group
from ..lifting.gproduct import EquivariantMap
from ..lifting.lift import descended_action, equivariance_report, lift, lift_through_quotient
from ..lifting.uniqueness import verify_lift_uniqueness


class LiftDemo(BaseModel):
    toy: str
    description: str
    group: str
    component_names: List[str]
    base_values: Dict[str, Any]
    lifted: Dict[str, List[Any]]
    per_element_deviation: Dict[str, float]
    max_deviation: float
    solutions: int
    matches_lift: bool

    @property
    def components(self) -> int:
        return len(self.component_names)

    @property
    def passed(self) -> bool:
        return self.max_deviation == 0.0 and self.solutions == 1 and self.matches_lift


class Toy(ABC):
    name: str
    description: str
    # Lift through G/N, N the kernel of the action on the domain.
    through_quotient: bool = False

    @abstractmethod
    def group(self) -> FiniteGroup:
        pass

    @abstractmethod
    def action(self, G: FiniteGroup) -> GroupAction:
        pass

    @abstractmethod
    def domain(self) -> Sequence[Any]:
        pass

    @abstractmethod
    def codomain(self) -> Sequence[Any]:
        pass

    @abstractmethod
    def base_map(self, x: Any) -> Any:
        pass

    def quotient(self, G: FiniteGroup, A: GroupAction) -> Optional[QuotientGroup]:
        if not self.through_quotient:
            return None
        return quotient_group(G, kernel_of_action(G, A, list(self.domain())))

    def run(self) -> LiftDemo:
        G = self.group()
        A = self.action(G)
        domain = list(self.domain())
        Q = self.quotient(G, A)

        if Q is None:
            lifted: EquivariantMap = lift(self.base_map, A, G, name=self.name)
            oracle = verify_lift_uniqueness(self.base_map, A, G, domain, self.codomain())
            names = list(G.element_names)
        else:
            lifted = lift_through_quotient(self.base_map, A, Q, domain)
            oracle = verify_lift_uniqueness(self.base_map, descended_action(A, Q), Q.group, domain, self.codomain())
            names = list(Q.group.element_names)

        report = equivariance_report(lifted, domain)
        return LiftDemo(
            toy=self.name,
            description=self.description,
            group=G.name,
            component_names=names,
            base_values={repr(x): self.base_map(x) for x in domain},
            lifted={repr(x): list(lifted(x).as_tuple()) for x in domain},
            per_element_deviation={G.element_names[g]: d for g, d in enumerate(report.per_element)},
            max_deviation=report.max_deviation,
            solutions=oracle.solutions,
            matches_lift=oracle.matches_lift,
        )
