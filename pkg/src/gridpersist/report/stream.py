"""Ordered rendering of report components."""

from __future__ import annotations

from typing import TYPE_CHECKING

from rich.console import Console

if TYPE_CHECKING:
    from gridpersist.report.components.base import Component


class RenderStream:
    """Prints components in order, each told what came before it."""

    def __init__(self, console: Console, max_history: int = 100):
        self.console = console
        self.history: list[Component] = []
        self.max_history = max_history

    def render(self, component: Component) -> None:
        component.set_context(self.last_component)
        self.history.append(component)
        if len(self.history) > self.max_history:
            self.history = self.history[-self.max_history :]
        component.render_with_spacing(self.console)

    @property
    def last_component(self) -> Component | None:
        return self.history[-1] if self.history else None

    def clear_history(self) -> None:
        self.history.clear()
