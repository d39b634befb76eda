# equivarifier/formatters/groups.py
from typing import Any

from .base import BaseFormatter


class GroupFormatter(BaseFormatter):
    def can_format(self, kind: str) -> bool:
        return kind == "group_info"

    def format(self, kind: str, report: Any) -> str:
        names = report.element_names

        def name(i: int) -> str:
            return names[i] if 0 <= i < len(names) else str(i)

        lines = [f"Group {report.name}: order {report.order}", ""]
        table = [[names[a]] + [name(v) for v in row] for a, row in enumerate(report.table)]
        lines.append(self._to_aligned_table(["·"] + list(names), table))
        lines.append("")
        lines.append(f"identity: {name(report.identity) if report.identity >= 0 else 'none'}")
        inverses = [f"{names[a]}⁻¹={name(b) if b >= 0 else '?'}" for a, b in enumerate(report.inverses)]
        lines.append("inverses: " + ", ".join(inverses))

        axioms = report.axioms
        mode = "exhaustive" if axioms.exhaustive else "sampled"
        if axioms.ok:
            lines.append(f"✅ Axioms OK ({mode})")
        else:
            lines.append(f"❌ {axioms.violation_count} axiom violation(s) ({mode}):")
            lines.append(self._to_markdown_table(
                ["Law", "Elements", "Detail"],
                [[v.law, v.elements, v.detail] for v in axioms.violations],
            ))
        return "\n".join(lines)

    def to_csv(self, kind: str, report: Any) -> str:
        rows = [["order", "", report.order], ["axioms_ok", "", report.axioms.ok]]
        rows += [["inverse", report.element_names[a], b] for a, b in enumerate(report.inverses)]
        rows += [["violation", v.law, " ".join(map(str, v.elements))] for v in report.axioms.violations]
        return self._csv(["field", "key", "value"], rows)
