# equivarifier/lifting/lift.py
"""
The unique equivariant lift into the G-product and its relatives.

    lift(F)(x)_k = F(g_k⁻¹ · x)

Component k of lift(F)(h·x) and component k of h·lift(F)(x) are the same
call F(g_k⁻¹h · x) on identical inputs, so equivariance holds exactly, not
merely up to rounding.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from ..actions.base import FunctionAction, GroupAction, PermutationAction, is_fixed
from ..actions.builtin import action_through_quotient, block_shift_action
from ..errors import InsufficientProbeError, NotWellDefinedError, ShapeError, WrongGroupError
from ..groups.core import FiniteGroup
from ..groups.subgroups import QuotientGroup
from ..utils.compare import max_abs_deviation
from .gproduct import EquivariantMap, GProductAction, GProductValue

logger = logging.getLogger(__name__)


def _stacked_codomain(G: FiniteGroup, base_shape: Optional[Sequence[int]], axis: int) -> Tuple[PermutationAction, int]:
    if base_shape is None:
        raise ShapeError("Stacked lifts need base_shape, the per-sample shape of F(x)")
    base_shape = tuple(int(d) for d in base_shape)
    if not base_shape:
        raise ShapeError("Cannot stack scalar components; use the tuple form")
    # Negative axes stay valid when inputs carry a batch dimension.
    if axis >= 0:
        axis -= len(base_shape)
    stacked = list(base_shape)
    stacked[axis] *= G.order
    return block_shift_action(G, base_shape[axis], tuple(stacked), axis=axis), axis


def lift(
    F: Callable[[Any], Any],
    A: GroupAction,
    G: FiniteGroup,
    stack_axis: Optional[int] = None,
    base_shape: Optional[Sequence[int]] = None,
    max_workers: int = 1,
    name: str = "lift",
) -> EquivariantMap:
    """
    Lift F: X → Z to the G-equivariant F̂: X → Z^{×G}.

    By default F̂(x) is a GProductValue acted on by GProductAction. With
    stack_axis set, the |G| components are concatenated along that axis and
    the codomain action is block_shift_action; base_shape is then required.

    With max_workers > 1 the |G| evaluations run on a thread pool; each
    result lands in its own slot, so the output does not change.
    """
    if not G.same_table(A.group):
        raise WrongGroupError(f"Action is over {A.group.name}, lift requested over {G.name}")
    inverses = [G.inverse(k) for k in G.elements]

    if stack_axis is None:
        codomain: GroupAction = GProductAction(G)
    else:
        codomain, stack_axis = _stacked_codomain(G, base_shape, stack_axis)

    def component(k: int, x: Any) -> Any:
        return F(A.apply(inverses[k], x))

    def forward(x: Any) -> Any:
        if max_workers > 1:
            with ThreadPoolExecutor(max_workers=max_workers) as pool:
                parts = list(pool.map(lambda k: component(k, x), G.elements))
        else:
            parts = [component(k, x) for k in G.elements]
        if stack_axis is None:
            return GProductValue(parts)
        return np.concatenate(parts, axis=stack_axis)

    return EquivariantMap(
        group=G,
        domain_action=A,
        codomain_action=codomain,
        forward=forward,
        base_map=F,
        name=name,
        stack_axis=stack_axis,
    )


def universal_map(
    p_prime: Callable[[Any], Any],
    A_prime: GroupAction,
    G: FiniteGroup,
    stack_axis: Optional[int] = None,
    base_shape: Optional[Sequence[int]] = None,
) -> EquivariantMap:
    """
    The comparison map π: Ẑ' → Z^{×G} of another equivarification (Ẑ', p'):

        π(ẑ')_k = p'(g_k⁻¹ · ẑ')

    π is equivariant, p ∘ π = p', and π ∘ F̂' = F̂ for every lift F̂' into Ẑ'.
    It is the lift of p' itself.
    """
    if not G.same_table(A_prime.group):
        raise WrongGroupError(f"Action is over {A_prime.group.name}, universal map requested over {G.name}")
    return lift(p_prime, A_prime, G, stack_axis=stack_axis, base_shape=base_shape, name="universal")


def descended_action(A: GroupAction, Q: QuotientGroup) -> GroupAction:
    """The action of G/N on X, each coset acting through its representative."""
    reps = list(Q.representatives)
    if isinstance(A, PermutationAction):
        return PermutationAction(Q.group, A.carrier_shape, A.perms[reps], label=f"{A.label}/N")

    def act(c: int, x: Any) -> Any:
        return A.apply(reps[c], x)

    return FunctionAction(Q.group, act, A.carrier_shape, label=f"{getattr(A, 'label', 'action')}/N")


def lift_through_quotient(
    F: Callable[[Any], Any],
    A: GroupAction,
    Q: QuotientGroup,
    probes: Sequence[Any],
    stack_axis: Optional[int] = None,
    base_shape: Optional[Sequence[int]] = None,
) -> EquivariantMap:
    """
    Lift into the smaller G/N-product, N the kernel of A.

    The kernel must act trivially; this is verified on the probes only
    (NotWellDefinedError otherwise). The result is equivariant for G,
    acting on the codomain through the quotient projection.
    """
    if not Q.parent.same_table(A.group):
        raise WrongGroupError(f"Action is over {A.group.name}, quotient is of {Q.parent.name}")
    probes = list(probes)
    if not probes:
        raise InsufficientProbeError("lift_through_quotient needs at least one probe value")
    for n in Q.kernel.members:
        for i, x in enumerate(probes):
            if not is_fixed(A, n, x):
                raise NotWellDefinedError(
                    f"Element {Q.parent.element_names[n]} of N moves probe {i}; the action does not descend to {Q.group.name}"
                )

    inner = lift(F, descended_action(A, Q), Q.group, stack_axis=stack_axis, base_shape=base_shape)
    logger.debug(f"Quotient lift over {Q.group.name}: {Q.group.order} components instead of {Q.parent.order}")
    return EquivariantMap(
        group=Q.parent,
        domain_action=A,
        codomain_action=action_through_quotient(Q, inner.codomain_action),
        forward=inner.forward,
        base_map=F,
        name="quotient_lift",
        stack_axis=inner.stack_axis,
        extras={"n_blocks": Q.group.order, "quotient": Q},
    )


class EquivarianceReport(BaseModel):
    """Worst |M(g·x) - g·M(x)| overall and per group element."""
    map: str
    samples: int
    max_deviation: float
    per_element: List[float]

    @property
    def exact(self) -> bool:
        return self.max_deviation == 0.0


def equivariance_report(M: EquivariantMap, samples: Sequence[Any]) -> EquivarianceReport:
    G = M.group
    per_element = [0.0] * G.order
    samples = list(samples)
    for x in samples:
        y = M(x)
        for g in G.elements:
            lhs = M(M.domain_action.apply(g, x))
            rhs = M.codomain_action.apply(g, y)
            per_element[g] = max(per_element[g], max_abs_deviation(lhs, rhs))
    return EquivarianceReport(
        map=M.name,
        samples=len(samples),
        max_deviation=max(per_element, default=0.0),
        per_element=per_element,
    )


def check_equivariance(M: EquivariantMap, samples: Sequence[Any]) -> float:
    """Max deviation from F(g·x) = g·F(x) over all elements and samples."""
    return equivariance_report(M, samples).max_deviation
