"""Aligned label and value pairs."""

from __future__ import annotations

from collections.abc import Mapping, Sequence

from rich.console import Console
from rich.table import Table as RichTable

from gridpersist.report.components.base import Component
from gridpersist.report.theme import Theme

Scalar = str | int | float | bool | None


class KeyValue(Component):
    """Run summary as a borderless two-column table.

    Args:
        theme: Report theme
        data: Pairs as a mapping or a list of tuples
        title: Optional caption above the pairs
    """

    component_type = "key_value"

    def __init__(
        self,
        theme: Theme,
        data: Mapping[str, Scalar] | Sequence[tuple[str, Scalar]],
        title: str | None = None,
    ):
        super().__init__(theme)
        self.data = data
        self.title = title

    def pairs(self) -> list[tuple[str, str]]:
        items = self.data.items() if isinstance(self.data, Mapping) else self.data
        return [(str(k), str(v)) for k, v in items]

    def render(self, console: Console) -> None:
        pairs = self.pairs()
        if not pairs:
            return
        table = RichTable(
            title=self.title,
            title_justify=self.theme.layout.title_align,
            box=None,
            show_header=False,
            padding=(0, 1),
            expand=False,
        )
        table.add_column(style=self.theme.typography.label_style)
        table.add_column(style=self.theme.typography.value_style)
        for key, value in pairs:
            table.add_row(key, value)
        console.print(table)
