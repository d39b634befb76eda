# equivarifier/formatters/base.py
import csv
import io
from abc import ABC, abstractmethod
from typing import Any, List, Sequence


class BaseFormatter(ABC):
    @abstractmethod
    def can_format(self, kind: str) -> bool:
        pass

    @abstractmethod
    def format(self, kind: str, report: Any) -> str:
        pass

    @abstractmethod
    def to_csv(self, kind: str, report: Any) -> str:
        pass

    def _to_markdown_table(self, headers: List[str], rows: List[List[Any]]) -> str:
        """Helper to create a markdown table."""
        if not headers or not rows:
            return ""
        header_str = "| " + " | ".join(headers) + " |"
        sep_str = "| " + " | ".join(["---"] * len(headers)) + " |"
        row_strs = ["| " + " | ".join([str(cell) for cell in row]) + " |" for row in rows]
        return "\n".join([header_str, sep_str] + row_strs)

    def _to_aligned_table(self, headers: List[str], rows: List[List[Any]]) -> str:
        """Whitespace-aligned columns, for wide numeric tables."""
        cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
        return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in cells)

    def _csv(self, headers: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(headers)
        writer.writerows(rows)
        return out.getvalue()
