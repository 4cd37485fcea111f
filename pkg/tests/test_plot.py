"""Tests for SVG barcode plots."""

from gridpersist.barcode_algebra import Interval
from gridpersist.plot import COLORS, render_svg, svg_barcode


class TestSvgBarcode:
    """Test the SVG document."""

    def test_document(self):
        """Test a plot has one rect per nonempty bar and both labels."""
        svg = svg_barcode({0: [Interval(0.0), Interval(0.0, 0.5)], 1: [Interval(0.2, 0.4), Interval(0.3, 0.3)]})

        assert svg.startswith("<svg")
        assert svg.rstrip().endswith("</svg>")
        assert svg.count("<rect") == 3
        assert ">H0<" in svg
        assert ">H1<" in svg

    def test_colors_by_degree(self):
        """Test degree 0 is red and degree 1 blue."""
        svg = svg_barcode({0: [Interval(0.0, 1.0)], 1: [Interval(0.5, 1.0)]})

        assert f'fill="{COLORS[0]}"' in svg
        assert f'fill="{COLORS[1]}"' in svg

    def test_infinity_marker(self):
        """Test the dashed infinity line is drawn and labelled."""
        svg = svg_barcode({0: [Interval(0.0)]})

        assert "stroke-dasharray" in svg
        assert ">inf</text>" in svg

    def test_empty_barcode(self):
        """Test a plot without bars is still a document."""
        svg = svg_barcode({0: [], 1: []})

        assert "<rect" not in svg
        assert "<svg" in svg


class TestRenderSvg:
    """Test writing plots to disk."""

    def test_writes_file(self, tmp_path):
        """Test the plot is written and its path returned."""
        path = render_svg({0: [Interval(0.0)]}, tmp_path / "bars.svg")

        assert path == tmp_path / "bars.svg"
        assert path.read_text().startswith("<svg")

    def test_accepts_string_path(self, tmp_path):
        """Test a string path is accepted."""
        path = render_svg({1: [Interval(0.1, 0.2)]}, str(tmp_path / "bars.svg"))

        assert path.exists()
