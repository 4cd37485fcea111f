"""Tests for the console report."""

from unittest.mock import MagicMock

import pytest
from rich import box as rich_box
from rich.console import Console
from rich.table import Table as RichTable
from rich.text import Text as RichText

from gridpersist.barcode_algebra import Interval
from gridpersist.report import Reporter, Theme
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
from gridpersist.report.components.barcode import format_bar
from gridpersist.report.stream import RenderStream


class TestTheme:
    """Test the Theme class."""

    def test_defaults(self):
        """Test default theme values."""
        theme = Theme()

        assert theme.width == 100
        assert theme.longest_bars == 5
        assert theme.icons.infinity == "∞"
        assert theme.layout.table_box is rich_box.HEAVY_HEAD

    def test_width_validation(self):
        """Test narrow consoles are rejected."""
        with pytest.raises(ValueError, match="Width must be an integer >= 20"):
            Theme(width=10)

    def test_longest_bars_validation(self):
        """Test a negative bar count is rejected."""
        with pytest.raises(ValueError, match="longest_bars"):
            Theme(longest_bars=-1)

    def test_transform_text(self):
        """Test header transforms."""
        theme = Theme()

        assert theme.transform_text("compute run", "upper") == "COMPUTE RUN"
        assert theme.transform_text("Compute", "lower") == "compute"
        assert theme.transform_text("compute run", "title") == "Compute Run"
        assert theme.transform_text("compute", "none") == "compute"

    def test_degree_style(self):
        """Test degrees map to their plot colors and others fall back."""
        theme = Theme()

        assert theme.degree_style(0) == "red"
        assert theme.degree_style(1) == "blue"
        assert theme.degree_style(7) == theme.typography.value_style


class TestMessages:
    """Test the status line components."""

    @pytest.mark.parametrize(
        ("cls", "icon", "style"),
        [
            (Info, "ℹ", "cyan"),
            (Success, "✔", "bold green"),
            (WarningText, "⚠", "bold yellow"),
            (Error, "✖", "bold red"),
        ],
    )
    def test_render(self, cls, icon, style):
        """Test each kind prints its icon in its style."""
        console = MagicMock(spec=Console)

        cls(Theme(), "MATCH").render(console)

        console.print.assert_called_once_with(f"{icon} MATCH", style=style)

    def test_empty_message(self):
        """Test an empty message is rejected."""
        with pytest.raises(ValueError, match="cannot be empty"):
            Info(Theme(), "")

    def test_non_string_message(self):
        """Test a non-string message is rejected."""
        with pytest.raises(TypeError, match="must be a string"):
            Error(Theme(), 42)

    def test_component_types(self):
        """Test component types drive spacing."""
        theme = Theme()

        assert Info(theme, "a").component_type == "info"
        assert Success(theme, "a").component_type == "success"
        assert WarningText(theme, "a").component_type == "warning"
        assert Error(theme, "a").component_type == "error"


class TestHeader:
    """Test the Header component."""

    def test_title_and_subtitle(self):
        """Test the title is transformed and the subtitle printed below."""
        console = MagicMock(spec=Console)

        Header(Theme(), "compute", "pts.txt on a 2x2 grid").render(console)

        assert console.print.call_count == 2
        title = console.print.call_args_list[0][0][0]
        assert isinstance(title, RichText)
        assert title.plain == "COMPUTE"
        assert console.print.call_args_list[1][0][0].plain == "pts.txt on a 2x2 grid"

    def test_no_subtitle(self):
        """Test a header without subtitle prints one line."""
        console = MagicMock(spec=Console)

        Header(Theme(), "oracle").render(console)

        console.print.assert_called_once()


class TestKeyValue:
    """Test the KeyValue component."""

    def test_from_dict(self):
        """Test rendering a run summary."""
        console = MagicMock(spec=Console)

        KeyValue(Theme(), {"points": 200, "workers": 4}).render(console)

        rendered = console.print.call_args[0][0]
        assert isinstance(rendered, RichTable)
        assert rendered.box is None
        assert rendered.row_count == 2

    def test_pairs_stringified(self):
        """Test values are converted to strings."""
        kv = KeyValue(Theme(), [("rounds", 2), ("withheld", None)])

        assert kv.pairs() == [("rounds", "2"), ("withheld", "None")]

    def test_empty(self):
        """Test empty data renders nothing."""
        console = MagicMock(spec=Console)

        KeyValue(Theme(), {}).render(console)

        console.print.assert_not_called()


class TestTable:
    """Test the Table component."""

    def test_columns_and_rows(self):
        """Test columns follow the first row and numeric ones align right."""
        console = MagicMock(spec=Console)
        rows = [{"phase": "Delaunay", "seconds": "0.100"}, {"phase": "total", "seconds": "0.100"}]

        Table(Theme(), rows, title="Timings", numeric=["seconds"]).render(console)

        rendered = console.print.call_args[0][0]
        assert isinstance(rendered, RichTable)
        assert rendered.title == "Timings"
        assert [c.header for c in rendered.columns] == ["phase", "seconds"]
        assert rendered.columns[1].justify == "right"
        assert rendered.row_count == 2

    def test_empty(self):
        """Test an empty table prints nothing."""
        console = MagicMock(spec=Console)

        Table(Theme(), []).render(console)

        console.print.assert_not_called()


class TestBarcodeSummary:
    """Test the per-degree barcode summary."""

    def test_counts_line(self):
        """Test the first line counts nonempty and infinite bars."""
        console = MagicMock(spec=Console)
        bars = [Interval(0.0), Interval(0.0, 0.25), Interval(0.3, 0.3)]

        BarcodeSummary(Theme(), 0, bars).render(console)

        first = console.print.call_args_list[0]
        assert first[0][0] == "▬ H0: 2 bars, 1 infinite"
        assert first[1]["style"] == "bold red"
        assert isinstance(console.print.call_args_list[1][0][0], RichTable)

    def test_longest_first(self):
        """Test the longest bars are listed, infinite ones first."""
        theme = Theme(longest_bars=2)
        bars = [Interval(0.1, 0.2), Interval(0.0, 5.0), Interval(1.0), Interval(0.2, 0.25)]

        summary = BarcodeSummary(theme, 1, bars)

        assert summary.longest() == [Interval(1.0), Interval(0.0, 5.0)]

    def test_no_bars(self):
        """Test an empty degree prints only the count line."""
        console = MagicMock(spec=Console)

        BarcodeSummary(Theme(), 1, []).render(console)

        console.print.assert_called_once()

    def test_format_bar(self):
        """Test bar formatting."""
        assert format_bar(Interval(0.25, 0.5)) == "[0.25, 0.5)"
        assert format_bar(Interval(0.0)) == "[0, ∞)"
        assert format_bar(Interval(0.0), infinity="inf") == "[0, inf)"


class TestRenderStream:
    """Test ordered rendering and spacing."""

    def test_history(self):
        """Test components are recorded in order."""
        console = MagicMock(spec=Console)
        stream = RenderStream(console)
        theme = Theme()

        first = Info(theme, "one")
        second = Success(theme, "two")
        stream.render(first)
        stream.render(second)

        assert stream.history == [first, second]
        assert stream.last_component is second

    def test_history_bounded(self):
        """Test only the most recent components are kept."""
        stream = RenderStream(MagicMock(spec=Console), max_history=3)

        for k in range(5):
            stream.render(Info(Theme(), f"line {k}"))

        assert len(stream.history) == 3
        assert stream.history[0].message == "line 2"

    def test_spacing(self):
        """Test a blank line separates unrelated components."""
        console = MagicMock(spec=Console)
        stream = RenderStream(console)
        theme = Theme()

        stream.render(Header(theme, "compute"))
        stream.render(Info(theme, "a"))
        stream.render(Info(theme, "b"))

        calls = [c[0][0] for c in console.print.call_args_list]
        assert calls[1] == "\n"
        assert calls[2] == "ℹ a"
        assert calls[3] == "ℹ b"

    def test_clear_history(self):
        """Test clearing forgets the previous component."""
        stream = RenderStream(MagicMock(spec=Console))
        stream.render(Info(Theme(), "a"))

        stream.clear_history()

        assert stream.last_component is None


class TestReporter:
    """Test the facade the command line prints through."""

    def test_barcodes_in_degree_order(self):
        """Test one summary per degree, lowest first."""
        console = MagicMock(spec=Console)
        reporter = Reporter(console=console)

        reporter.barcodes({1: [Interval(0.2, 0.4)], 0: [Interval(0.0)]})

        lines = [c[0][0] for c in console.print.call_args_list if isinstance(c[0][0], str)]
        assert lines[0].startswith("▬ H0")
        assert lines[-1].startswith("▬ H1")

    def test_timings_total(self):
        """Test the timing table ends with a total row."""
        reporter = Reporter(console=MagicMock(spec=Console))

        reporter.timings({"Delaunay": 0.25, "FinalBarcode": 0.5})

        table = reporter.stream.last_component
        assert isinstance(table, Table)
        assert table.data[-1] == {"phase": "total", "seconds": "0.750"}

    def test_partial(self):
        """Test partial second-page terms are tabulated by name."""
        reporter = Reporter(console=MagicMock(spec=Console))

        reporter.partial({"E2[0][1]": [Interval(1.0)], "E2[0][0]": [Interval(0.0), Interval(0.0, 1.0)]})

        table = reporter.stream.last_component
        assert table.data == [
            {"term": "E2[0][0]", "bars": 2, "infinite": 1},
            {"term": "E2[0][1]", "bars": 1, "infinite": 1},
        ]

    @pytest.mark.parametrize(
        ("method", "component", "icon"),
        [("info", Info, "ℹ"), ("warning", WarningText, "⚠")],
    )
    def test_notices(self, method, component, icon):
        """Test info and warning lines render through the stream with their icon."""
        console = MagicMock(spec=Console)
        reporter = Reporter(console=console)

        getattr(reporter, method)("Subcomplex of zone 1 is not connected")

        assert isinstance(reporter.stream.last_component, component)
        assert console.print.call_args_list[-1][0][0] == f"{icon} Subcomplex of zone 1 is not connected"

    def test_default_console_width(self):
        """Test the default console takes the theme width."""
        reporter = Reporter(theme=Theme(width=60))

        assert reporter.console.width == 60
