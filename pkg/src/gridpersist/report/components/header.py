"""Report title."""

from __future__ import annotations

from rich.console import Console
from rich.text import Text as RichText

from gridpersist.report.components.base import Component
from gridpersist.report.theme import Theme


class Header(Component):
    """Title line with an optional subtitle.

    Args:
        theme: Report theme
        title: Main title, transformed per the theme
        subtitle: Secondary line, e.g. the input file and grid
    """

    component_type = "header"

    def __init__(self, theme: Theme, title: str, subtitle: str | None = None):
        super().__init__(theme)
        self.title = title
        self.subtitle = subtitle

    def render(self, console: Console) -> None:
        typography = self.theme.typography
        title = self.theme.transform_text(self.title, typography.header_transform)
        console.print(RichText(title, style=typography.header_style))
        if self.subtitle:
            console.print(RichText(self.subtitle, style=typography.subheader_style))
