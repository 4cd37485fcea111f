"""Console report of a run."""

from __future__ import annotations

from collections.abc import Mapping, Sequence

from rich.console import Console

from gridpersist.barcode_algebra import Interval
from gridpersist.report.components import (
    BarcodeSummary,
    Error,
    Header,
    Info,
    KeyValue,
    Success,
    Table,
    WarningText,
)
from gridpersist.report.components.key_value import Scalar
from gridpersist.report.stream import RenderStream
from gridpersist.report.theme import Theme


class Reporter:
    """Facade the command line prints through.

    Args:
        console: Console to print to; a new stdout console of the theme's width by default
        theme: Report theme

    Example:
        >>> reporter = Reporter()
        >>> reporter.header("compute", "pts.txt on a 2x2 grid")
        >>> reporter.success("MATCH")
    """

    def __init__(self, console: Console | None = None, theme: Theme | None = None):
        self.theme = theme or Theme()
        self.console = console or Console(width=self.theme.width)
        self.stream = RenderStream(self.console)

    def header(self, title: str, subtitle: str | None = None) -> None:
        self.stream.render(Header(self.theme, title, subtitle))

    def info(self, message: str) -> None:
        self.stream.render(Info(self.theme, message))

    def success(self, message: str) -> None:
        self.stream.render(Success(self.theme, message))

    def warning(self, message: str) -> None:
        self.stream.render(WarningText(self.theme, message))

    def error(self, message: str) -> None:
        self.stream.render(Error(self.theme, message))

    def summary(self, data: Mapping[str, Scalar], title: str | None = None) -> None:
        self.stream.render(KeyValue(self.theme, data, title))

    def barcodes(self, barcodes: Mapping[int, Sequence[Interval]]) -> None:
        for dim in sorted(barcodes):
            self.stream.render(BarcodeSummary(self.theme, dim, barcodes[dim]))

    def timings(self, timings: Mapping[str, float]) -> None:
        """Phase timings in run order, with a total row."""
        rows: list[dict[str, str | int | float | None]] = [
            {"phase": phase, "seconds": f"{seconds:.3f}"} for phase, seconds in timings.items()
        ]
        rows.append({"phase": "total", "seconds": f"{sum(timings.values()):.3f}"})
        self.stream.render(Table(self.theme, rows, title="Timings", numeric=["seconds"]))

    def partial(self, terms: Mapping[str, Sequence[Interval]]) -> None:
        """Second-page barcodes kept after a failed collapse check."""
        rows: list[dict[str, str | int | float | None]] = [
            {
                "term": name,
                "bars": len(bars),
                "infinite": sum(1 for iv in bars if iv.is_infinite),
            }
            for name, bars in sorted(terms.items())
        ]
        self.stream.render(Table(self.theme, rows, title="Second page", numeric=["bars", "infinite"]))
