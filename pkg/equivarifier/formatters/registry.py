# equivarifier/formatters/registry.py
from typing import Any, List

from .base import BaseFormatter


class FormatterRegistry:
    _formatters: List[BaseFormatter] = []

    @classmethod
    def register(cls, formatter: BaseFormatter):
        cls._formatters.append(formatter)

    @classmethod
    def _find(cls, kind: str):
        for formatter in cls._formatters:
            if formatter.can_format(kind):
                return formatter
        return None

    @classmethod
    def format(cls, kind: str, report: Any, as_csv: bool = False) -> str:
        formatter = cls._find(kind)
        if formatter is not None:
            return formatter.to_csv(kind, report) if as_csv else formatter.format(kind, report)

        # Generic JSON fallback
        if hasattr(report, "model_dump_json"):
            return report.model_dump_json(indent=2)
        import json
        return json.dumps(report, indent=2, default=str)


def get_registry():
    return FormatterRegistry
