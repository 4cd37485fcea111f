"""Console theme for run reports."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from rich import box as rich_box

TitleAlign = Literal["left", "center", "right"]


@dataclass
class Icons:
    """Glyphs prefixed to report lines.

    Attributes:
        success: Run or comparison succeeded
        error: Run failed
        warning: Something worth a second look
        info: Neutral status line
        bar: Marker for a listed interval
        infinity: Death shown for bars that never die
    """

    success: str = "✔"
    error: str = "✖"
    warning: str = "⚠"
    info: str = "ℹ"
    bar: str = "▬"
    infinity: str = "∞"


@dataclass
class Typography:
    """Rich styles for each kind of report text."""

    header_style: str = "bold white"
    header_transform: str = "upper"  # upper, lower, title, none
    subheader_style: str = "dim white"

    label_style: str = "bold"
    value_style: str = "default"

    success_style: str = "bold green"
    error_style: str = "bold red"
    warning_style: str = "bold yellow"
    info_style: str = "cyan"
    muted_style: str = "bright_black"

    # Per homology degree; matches the SVG plot colors
    degree_styles: dict[int, str] = field(default_factory=lambda: {0: "red", 1: "blue"})


@dataclass
class Layout:
    title_align: TitleAlign = "left"
    table_box: rich_box.Box = field(default_factory=lambda: rich_box.HEAVY_HEAD)
    table_border_style: str = "bright_black"
    table_expand: bool = False


@dataclass
class ComponentSpacing:
    """Blank lines between consecutive components.

    Each field maps the previous component type to the spacing before this
    one. Anything not listed gets one blank line.
    """

    info: dict[str, int] = field(default_factory=lambda: {"info": 0, "success": 0})
    success: dict[str, int] = field(default_factory=lambda: {"info": 0})
    warning: dict[str, int] = field(default_factory=lambda: {"info": 0, "warning": 0})
    key_value: dict[str, int] = field(default_factory=dict)
    barcode_summary: dict[str, int] = field(default_factory=lambda: {"barcode_summary": 0})


@dataclass
class Theme:
    """Visual configuration of a report.

    Args:
        icons: Line glyphs
        typography: Text styles
        layout: Table layout
        spacing: Spacing rules between components
        width: Console width in characters (must be >= 20)
        longest_bars: Bars listed per degree in a barcode summary

    Raises:
        ValueError: If width < 20 or longest_bars < 0
    """

    icons: Icons = field(default_factory=Icons)
    typography: Typography = field(default_factory=Typography)
    layout: Layout = field(default_factory=Layout)
    spacing: ComponentSpacing = field(default_factory=ComponentSpacing)
    width: int = 100
    longest_bars: int = 5

    def __post_init__(self) -> None:
        if not isinstance(self.width, int) or self.width < 20:
            raise ValueError(f"Width must be an integer >= 20, got {self.width}")
        if self.longest_bars < 0:
            raise ValueError(f"longest_bars must be >= 0, got {self.longest_bars}")

    def transform_text(self, text: str, transform: str) -> str:
        if transform == "upper":
            return text.upper()
        if transform == "lower":
            return text.lower()
        if transform == "title":
            return text.title()
        return text

    def degree_style(self, dim: int) -> str:
        return self.typography.degree_styles.get(dim, self.typography.value_style)
