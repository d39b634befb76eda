# equivarifier/actions/verify.py
import logging
from typing import Any, List, Sequence

from pydantic import BaseModel

from ..errors import InsufficientProbeError
from ..utils.compare import max_abs_deviation
from .base import GroupAction

logger = logging.getLogger(__name__)

MAX_LISTED = 20


class ActionViolation(BaseModel):
    law: str  # "identity" or "composition"
    g1: int
    g2: int
    sample: int
    deviation: float


class ActionReport(BaseModel):
    action: str
    group: str
    samples: int
    checked: int = 0
    identity_deviation: float = 0.0
    composition_deviation: float = 0.0
    violation_count: int = 0
    violations: List[ActionViolation] = []

    @property
    def max_deviation(self) -> float:
        return max(self.identity_deviation, self.composition_deviation)

    @property
    def ok(self) -> bool:
        return self.violation_count == 0


def verify_action(A: GroupAction, samples: Sequence[Any]) -> ActionReport:
    """
    Check e·x = x and g1·(g2·x) = (g1g2)·x over every (g1, g2, sample).
    Returns the worst deviation of each law; exact for permutation actions.
    """
    samples = list(samples)
    if not samples:
        raise InsufficientProbeError("verify_action needs at least one sample")
    G = A.group
    report = ActionReport(action=A.describe(), group=G.name, samples=len(samples))

    def record(law: str, g1: int, g2: int, s: int, dev: float):
        if dev == 0.0:
            return
        report.violation_count += 1
        if len(report.violations) < MAX_LISTED:
            report.violations.append(ActionViolation(law=law, g1=g1, g2=g2, sample=s, deviation=dev))

    for s, x in enumerate(samples):
        dev = max_abs_deviation(A.apply(G.identity, x), x)
        report.identity_deviation = max(report.identity_deviation, dev)
        record("identity", G.identity, G.identity, s, dev)

        moved = [A.apply(g, x) for g in G.elements]
        for g1 in G.elements:
            for g2 in G.elements:
                lhs = A.apply(g1, moved[g2])
                rhs = moved[int(G.table[g1, g2])]
                dev = max_abs_deviation(lhs, rhs)
                report.checked += 1
                report.composition_deviation = max(report.composition_deviation, dev)
                record("composition", g1, g2, s, dev)

    if not report.ok:
        logger.warning(f"⚠️ {report.action}: {report.violation_count} action-law violations")
    return report
