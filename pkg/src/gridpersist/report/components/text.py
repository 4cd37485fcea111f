"""Status lines."""

from __future__ import annotations

from rich.console import Console

from gridpersist.report.components.base import Component
from gridpersist.report.theme import Theme


class Message(Component):
    """One line with an icon, styled by its kind.

    Args:
        theme: Report theme
        message: Text to print, must be non-empty
        kind: One of info, success, warning or error

    Raises:
        TypeError: If message is not a string
        ValueError: If message is empty
    """

    def __init__(self, theme: Theme, message: str, kind: str = "info"):
        super().__init__(theme)
        if not isinstance(message, str):
            raise TypeError(f"Message must be a string, got {type(message).__name__}")
        if not message:
            raise ValueError("Message cannot be empty")
        self.message = message
        self.component_type = kind

    def render(self, console: Console) -> None:
        icons, typography = self.theme.icons, self.theme.typography
        icon = getattr(icons, self.component_type, icons.info)
        style = getattr(typography, f"{self.component_type}_style", typography.info_style)
        console.print(f"{icon} {self.message}", style=style)


class Info(Message):
    component_type = "info"

    def __init__(self, theme: Theme, message: str):
        super().__init__(theme, message, "info")


class Success(Message):
    component_type = "success"

    def __init__(self, theme: Theme, message: str):
        super().__init__(theme, message, "success")


class WarningText(Message):
    component_type = "warning"

    def __init__(self, theme: Theme, message: str):
        super().__init__(theme, message, "warning")


class Error(Message):
    component_type = "error"

    def __init__(self, theme: Theme, message: str):
        super().__init__(theme, message, "error")
