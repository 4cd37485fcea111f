"""Per-degree barcode summary."""

from __future__ import annotations

from collections.abc import Sequence

from rich.console import Console
from rich.table import Table as RichTable

from gridpersist.barcode_algebra import Interval
from gridpersist.report.components.base import Component
from gridpersist.report.theme import Theme


def persistence(interval: Interval) -> float:
    return interval.death - interval.birth


def format_bar(interval: Interval, infinity: str = "∞") -> str:
    death = infinity if interval.is_infinite else f"{interval.death:.6g}"
    return f"[{interval.birth:.6g}, {death})"


class BarcodeSummary(Component):
    """Bar counts of one degree and its longest bars.

    Args:
        theme: Report theme
        dim: Homology degree
        intervals: Bars of that degree
    """

    component_type = "barcode_summary"

    def __init__(self, theme: Theme, dim: int, intervals: Sequence[Interval]):
        super().__init__(theme)
        self.dim = dim
        self.intervals = [iv for iv in intervals if not iv.is_empty]

    def longest(self) -> list[Interval]:
        ranked = sorted(self.intervals, key=lambda iv: (-persistence(iv), iv.birth))
        return ranked[: self.theme.longest_bars]

    def render(self, console: Console) -> None:
        icons = self.theme.icons
        style = self.theme.degree_style(self.dim)
        infinite = sum(1 for iv in self.intervals if iv.is_infinite)
        console.print(
            f"{icons.bar} H{self.dim}: {len(self.intervals)} bars, {infinite} infinite",
            style=f"bold {style}",
        )
        longest = self.longest()
        if not longest:
            return
        table = RichTable(box=None, show_header=False, padding=(0, 1), expand=False)
        table.add_column(style=style)
        table.add_column(justify="right", style=self.theme.typography.muted_style)
        for iv in longest:
            length = icons.infinity if iv.is_infinite else f"{persistence(iv):.6g}"
            table.add_row(format_bar(iv, icons.infinity), length)
        console.print(table)
