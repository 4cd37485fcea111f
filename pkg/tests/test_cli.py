"""Tests for the ph command line."""

import pytest
from click.testing import CliRunner

from gridpersist import __version__, cli
from gridpersist.alpha import FilteredComplex2D
from gridpersist.barcode_algebra import Interval
from gridpersist.cover import NerveComplex
from gridpersist.datasets import noisy_circle, read_barcode, uniform_square, write_points
from gridpersist.errors import CollapseError
from gridpersist.oracle import sequential_persistence
from gridpersist.runtime import RunResult
from gridpersist.spectral import collapse_check, first_page, second_page


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def points_file(tmp_path):
    path = tmp_path / "pts.txt"
    write_points(path, noisy_circle(120, seed=2, noise=0.05))
    return path


class TestMain:
    """Test the command group."""

    def test_version(self, runner):
        """Test --version prints the program name and version."""
        result = runner.invoke(cli.main, ["--version"])

        assert result.exit_code == 0
        assert f"ph, version {__version__}" in result.output

    def test_help_lists_commands(self, runner):
        """Test both commands are listed."""
        result = runner.invoke(cli.main, ["--help"])

        assert result.exit_code == 0
        assert "compute" in result.output
        assert "oracle" in result.output


class TestCompute:
    """Test ph compute."""

    def test_writes_barcode_files(self, runner, points_file, tmp_path):
        """Test dim0.txt and dim1.txt hold the oracle's barcodes."""
        out = tmp_path / "out"

        result = runner.invoke(
            cli.main,
            ["compute", "--input", str(points_file), "--grid", "2x2", "--density", "20", "--output", str(out)],
        )

        assert result.exit_code == 0, result.output
        expected = sequential_persistence(cli.read_points(points_file))
        assert read_barcode(out / "dim0.txt") == {0: expected[0]}
        assert read_barcode(out / "dim1.txt") == {1: expected[1]}
        assert "Wrote dim0.txt, dim1.txt" in result.output

    def test_compare_match(self, runner, points_file, tmp_path):
        """Test --compare reports a match."""
        result = runner.invoke(
            cli.main,
            [
                "compute",
                "--input", str(points_file),
                "--grid", "2x1",
                "--density", "coarse",
                "--output", str(tmp_path),
                "--compare",
                "--seed", "7",
            ],
        )

        assert result.exit_code == 0, result.output
        assert "MATCH" in result.output
        assert "MISMATCH" not in result.output

    def test_compare_mismatch(self, runner, points_file, tmp_path, monkeypatch):
        """Test a differing result exits with status 1."""
        real_run = cli.run

        def shifted(points, config):
            result = real_run(points, config)
            result.barcodes[0] = result.barcodes[0][:-1]
            return result

        monkeypatch.setattr(cli, "run", shifted)

        result = runner.invoke(
            cli.main, ["compute", "--input", str(points_file), "--output", str(tmp_path), "--compare"]
        )

        assert result.exit_code == cli.EXIT_ERROR
        assert "MISMATCH in degree 0" in result.output

    def test_summary_and_timings(self, runner, points_file, tmp_path):
        """Test the run summary and timing table are printed."""
        result = runner.invoke(
            cli.main,
            ["compute", "--input", str(points_file), "--grid", "2x2", "--density", "20", "--output", str(tmp_path), "--timings"],
        )

        assert result.exit_code == 0, result.output
        assert "workers" in result.output
        assert "Timings" in result.output
        assert "total" in result.output
        assert "H0:" in result.output

    def test_localized_and_plot(self, runner, points_file, tmp_path):
        """Test --localized and --plot write their files."""
        localized = tmp_path / "bars.txt"
        plot = tmp_path / "bars.svg"

        result = runner.invoke(
            cli.main,
            [
                "compute",
                "--input", str(points_file),
                "--grid", "2x2",
                "--density", "20",
                "--output", str(tmp_path),
                "--localized", str(localized),
                "--plot", str(plot),
            ],
        )

        assert result.exit_code == 0, result.output
        assert plot.read_text().startswith("<svg")
        assert "Wrote dim0.txt, dim1.txt, bars.svg, bars.txt" in result.output
        lines = localized.read_text().splitlines()
        assert lines
        for line in lines:
            dim, _, _, origin = line.split()
            assert dim in {"0", "1"}
            assert origin.startswith(("E2[", "withheld:"))

    def test_all_entries(self, runner, points_file, tmp_path):
        """Test shipping every generator gives the same files."""
        a, b = tmp_path / "a", tmp_path / "b"
        base = ["compute", "--input", str(points_file), "--grid", "2x2", "--density", "20"]

        assert runner.invoke(cli.main, [*base, "--output", str(a)]).exit_code == 0
        assert runner.invoke(cli.main, [*base, "--output", str(b), "--all-entries"]).exit_code == 0

        for name in ("dim0.txt", "dim1.txt"):
            assert (a / name).read_text() == (b / name).read_text()

    def test_parse_error(self, runner, tmp_path):
        """Test a malformed point file exits with status 1 and names the line."""
        path = tmp_path / "bad.txt"
        path.write_text("0 0\n1 one\n")

        result = runner.invoke(cli.main, ["compute", "--input", str(path), "--output", str(tmp_path)])

        assert result.exit_code == cli.EXIT_ERROR
        assert "bad.txt:2" in result.output

    def test_empty_input(self, runner, tmp_path):
        """Test an empty point file exits with status 1."""
        path = tmp_path / "empty.txt"
        path.write_text("# nothing\n")

        result = runner.invoke(cli.main, ["compute", "--input", str(path), "--output", str(tmp_path)])

        assert result.exit_code == cli.EXIT_ERROR

    def test_collapse_failure(self, runner, points_file, tmp_path, monkeypatch):
        """Test a failed collapse check exits with status 2 and shows partial terms."""

        def collapse(points, config):
            raise CollapseError("E2[0][1]", Interval(1.0), {"E2[0][1]": [Interval(1.0)]})

        monkeypatch.setattr(cli, "run", collapse)

        result = runner.invoke(cli.main, ["compute", "--input", str(points_file), "--output", str(tmp_path)])

        assert result.exit_code == cli.EXIT_COLLAPSE
        assert "Collapse check failed" in result.output
        assert "Second page" in result.output
        assert not (tmp_path / "dim0.txt").exists()

    def test_collapse_failure_from_second_page(self, runner, points_file, tmp_path, monkeypatch):
        """Test the exit-2 path on a second page where one zone's loop meets no intersection."""
        loop = {(v,): 0.0 for v in range(5)}
        loop.update({(0, 1): 1.0, (1, 2): 1.0, (2, 3): 1.0, (0, 3): 1.0, (3, 4): 1.0})
        bridge = {(3,): 0.0, (4,): 0.0, (3, 4): 1.0}
        complexes = {
            (0,): FilteredComplex2D(loop),
            (1,): FilteredComplex2D(dict(bridge)),
            (0, 1): FilteredComplex2D(dict(bridge)),
        }

        def hidden_loop(points, config):
            nerve = NerveComplex.from_simplices(complexes)
            collapse_check(second_page(first_page(nerve, complexes)))
            return RunResult({0: [], 1: []})

        monkeypatch.setattr(cli, "run", hidden_loop)

        result = runner.invoke(cli.main, ["compute", "--input", str(points_file), "--output", str(tmp_path)])

        assert result.exit_code == cli.EXIT_COLLAPSE
        assert "E2[0][1] holds infinite bar" in result.output
        assert "Second page" in result.output
        assert "E2[1][1]" in result.output
        assert not (tmp_path / "dim0.txt").exists()

    def test_disconnected_zone_warning(self, runner, points_file, tmp_path, monkeypatch):
        """Test a disconnected subcomplex is reported as a warning without failing."""

        def disconnected(points, config):
            stats = {"rounds": 1, "withheld": 0, "messages": 12, "disconnected": [1]}
            return RunResult({0: [Interval(0.0)], 1: []}, stats=stats)

        monkeypatch.setattr(cli, "run", disconnected)

        result = runner.invoke(cli.main, ["compute", "--input", str(points_file), "--output", str(tmp_path)])

        assert result.exit_code == 0, result.output
        assert "⚠ Subcomplex of zone 1 is not connected" in result.output
        assert "Wrote dim0.txt, dim1.txt" in result.output

    @pytest.mark.parametrize("density", ["dense", "0", "-3"])
    def test_bad_density(self, runner, points_file, density):
        """Test an unknown density is a usage error."""
        result = runner.invoke(cli.main, ["compute", "--input", str(points_file), "--density", density])

        assert result.exit_code == 2
        assert "density" in result.output

    def test_bad_grid(self, runner, points_file, tmp_path):
        """Test a malformed grid exits with status 1."""
        result = runner.invoke(
            cli.main, ["compute", "--input", str(points_file), "--grid", "two", "--output", str(tmp_path)]
        )

        assert result.exit_code == cli.EXIT_ERROR
        assert "M1xM2" in result.output

    def test_missing_input(self, runner, tmp_path):
        """Test a missing input file is a usage error."""
        result = runner.invoke(cli.main, ["compute", "--input", str(tmp_path / "nope.txt")])

        assert result.exit_code == 2


class TestOracle:
    """Test ph oracle."""

    def test_writes_barcode_files(self, runner, tmp_path):
        """Test the sequential barcodes are written."""
        path = tmp_path / "pts.txt"
        write_points(path, uniform_square(40, seed=1))

        result = runner.invoke(cli.main, ["oracle", "--input", str(path), "--output", str(tmp_path / "out")])

        assert result.exit_code == 0, result.output
        assert "ORACLE" in result.output
        assert "Wrote dim0.txt, dim1.txt" in result.output
        bars = read_barcode(tmp_path / "out" / "dim0.txt")
        assert sum(1 for iv in bars[0] if iv.is_infinite) == 1

    def test_plot(self, runner, tmp_path):
        """Test --plot writes an SVG."""
        path = tmp_path / "pts.txt"
        write_points(path, uniform_square(20, seed=2))

        result = runner.invoke(
            cli.main, ["oracle", "--input", str(path), "--output", str(tmp_path), "--plot", str(tmp_path / "p.svg")]
        )

        assert result.exit_code == 0
        assert (tmp_path / "p.svg").exists()
