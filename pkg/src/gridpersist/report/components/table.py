"""Tabular data such as phase timings."""

from __future__ import annotations

from collections.abc import Mapping, Sequence

from rich.console import Console
from rich.table import Table as RichTable

from gridpersist.report.components.base import Component
from gridpersist.report.theme import Theme

Row = Mapping[str, str | int | float | None]


class Table(Component):
    """Rows of dictionaries sharing the keys of the first row.

    Args:
        theme: Report theme
        data: Rows to print
        title: Optional table title
        numeric: Columns to right-align
    """

    component_type = "table"

    def __init__(
        self,
        theme: Theme,
        data: Sequence[Row],
        title: str | None = None,
        numeric: Sequence[str] = (),
    ):
        super().__init__(theme)
        self.data = data
        self.title = title
        self.numeric = set(numeric)

    def build(self) -> RichTable:
        layout, typography = self.theme.layout, self.theme.typography
        table = RichTable(
            title=self.title,
            title_justify=layout.title_align,
            box=layout.table_box,
            border_style=layout.table_border_style,
            title_style=typography.header_style,
            header_style=typography.label_style,
            expand=layout.table_expand,
        )
        columns = list(self.data[0].keys())
        for name in columns:
            table.add_column(name, justify="right" if name in self.numeric else "left")
        for row in self.data:
            table.add_row(*(str(row.get(name, "")) for name in columns))
        return table

    def render(self, console: Console) -> None:
        if self.data:
            console.print(self.build())
