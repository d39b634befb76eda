# equivarifier/formatters/lifting.py
from typing import Any

from .base import BaseFormatter


class LiftDemoFormatter(BaseFormatter):
    def can_format(self, kind: str) -> bool:
        return kind == "lift_demo"

    def format(self, kind: str, report: Any) -> str:
        lines = [f"Toy '{report.toy}' over {report.group}: {report.description}", ""]
        headers = ["x", "F(x)"] + [f"F̂(x)[{n}]" for n in report.component_names]
        rows = [[x, report.base_values[x], *report.lifted[x]] for x in report.lifted]
        lines.append(self._to_markdown_table(headers, rows))
        lines.append("")
        lines.append(self._to_markdown_table(
            ["g", "max |F̂(g·x) - g·F̂(x)|"],
            [[g, f"{d:.3g}"] for g, d in report.per_element_deviation.items()],
        ))
        lines.append("")
        verdict = "✅" if report.passed else "❌"
        lines.append(
            f"{verdict} {report.components} component(s); brute force found {report.solutions} "
            f"equivariant lift(s), matches constructed lift: {report.matches_lift}"
        )
        return "\n".join(lines)

    def to_csv(self, kind: str, report: Any) -> str:
        headers = ["x", "F"] + list(report.component_names)
        rows = [[x, report.base_values[x], *report.lifted[x]] for x in report.lifted]
        return self._csv(headers, rows)
