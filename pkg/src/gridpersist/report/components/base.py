"""Base class of report components."""

from __future__ import annotations

from abc import ABC, abstractmethod

from rich.console import Console

from gridpersist.report.theme import Theme


class Component(ABC):
    """Something the report prints, aware of what was printed before it."""

    component_type: str = "base"

    def __init__(self, theme: Theme):
        self.theme = theme
        self._previous_component: Component | None = None

    def set_context(self, previous: Component | None) -> None:
        self._previous_component = previous

    def get_spacing_before(self) -> int:
        """Blank lines before this component, from the theme's rules."""
        if self._previous_component is None:
            return 0
        rules = getattr(self.theme.spacing, self.component_type, {})
        return int(rules.get(self._previous_component.component_type, 1))

    def render_with_spacing(self, console: Console) -> None:
        spacing = self.get_spacing_before()
        if spacing > 0:
            console.print("\n" * spacing, end="")
        self.render(console)

    @abstractmethod
    def render(self, console: Console) -> None:
        """Print the component."""
