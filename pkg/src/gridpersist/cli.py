"""Command line: ``ph compute`` and ``ph oracle``."""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from pathlib import Path

import click

from gridpersist import __version__
from gridpersist.barcode_algebra import Interval
from gridpersist.config import DEFAULT_TOLERANCE, DENSITY_PRESETS, GridConfig, RunConfig
from gridpersist.datasets import format_value, read_points, write_barcode
from gridpersist.errors import CollapseError, GridPersistError
from gridpersist.log import configure_logging
from gridpersist.oracle import compare, sequential_persistence
from gridpersist.plot import render_svg
from gridpersist.report import Reporter
from gridpersist.runtime import LocalizedInterval, RunResult, run

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_COLLAPSE = 2

_FILE = click.Path(dir_okay=False, path_type=Path)
_INPUT = click.Path(exists=True, dir_okay=False, path_type=Path)
_DIR = click.Path(file_okay=False, path_type=Path)


def _density(_: click.Context, __: click.Parameter, value: str) -> int:
    if value in DENSITY_PRESETS:
        return DENSITY_PRESETS[value]
    try:
        density = int(value)
    except ValueError:
        raise click.BadParameter(
            f"expected a positive integer or one of {', '.join(DENSITY_PRESETS)}"
        ) from None
    if density < 1:
        raise click.BadParameter(f"density must be positive, got {density}")
    return density


def write_outputs(
    barcodes: Mapping[int, Sequence[Interval]], output: Path, plot: Path | None
) -> list[Path]:
    """Write ``dim0.txt``, ``dim1.txt`` and the optional plot."""
    output.mkdir(parents=True, exist_ok=True)
    written = []
    for dim in (0, 1):
        path = output / f"dim{dim}.txt"
        write_barcode(path, dim, barcodes.get(dim, []))
        written.append(path)
    if plot is not None:
        written.append(render_svg(barcodes, plot))
    return written


def write_localized(path: Path, localized: Sequence[LocalizedInterval]) -> None:
    lines = [
        f"{li.dim} {format_value(li.interval.birth)} {format_value(li.interval.death)} {li.origin}\n"
        for li in localized
    ]
    path.write_text("".join(lines))


@click.group()
@click.option("-v", "--verbose", count=True, help="Log progress; repeat for debug output.")
@click.version_option(__version__, prog_name="ph")
@click.pass_context
def main(ctx: click.Context, verbose: int) -> None:
    """Persistent homology of planar point clouds over a grid cover."""
    configure_logging(verbose)
    ctx.obj = Reporter()


@main.command()
@click.option("--input", "input_path", type=_INPUT, required=True, help="Point file, one 'x y' per line.")
@click.option("--grid", default="1x1", show_default=True, help="Cover shape as M1xM2.")
@click.option(
    "--density",
    default="default",
    show_default=True,
    callback=_density,
    help="Points per grid cell, or a preset name.",
)
@click.option("--output", type=_DIR, default=Path(), show_default=True, help="Directory for dim0.txt and dim1.txt.")
@click.option("--compare", "do_compare", is_flag=True, help="Check the result against the sequential pipeline.")
@click.option("--tolerance", type=float, default=DEFAULT_TOLERANCE, show_default=True)
@click.option("--plot", type=_FILE, default=None, help="Write an SVG barcode plot.")
@click.option("--localized", type=_FILE, default=None, help="Write each bar with its origin.")
@click.option("--seed", type=int, default=None, help="Seed of the message delivery fuzzer.")
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--timings", is_flag=True, help="Print phase timings.")
@click.option("--all-entries", is_flag=True, help="Ship every local generator to the coordinators.")
@click.pass_context
def compute(
    ctx: click.Context,
    input_path: Path,
    grid: str,
    density: int,
    output: Path,
    do_compare: bool,
    tolerance: float,
    plot: Path | None,
    localized: Path | None,
    seed: int | None,
    threads: int,
    timings: bool,
    all_entries: bool,
) -> None:
    """Distributed barcodes in degrees 0 and 1."""
    reporter: Reporter = ctx.obj
    reporter.header("compute", f"{input_path} on a {grid} grid")
    try:
        config = RunConfig(
            GridConfig.parse(grid, density),
            optimised_entries=not all_entries,
            seed=seed,
            threads=threads,
            tolerance=tolerance,
        )
        points = read_points(input_path)
        result: RunResult = run(points, config)
        written = write_outputs(result.barcodes, output, plot)
        if localized is not None:
            write_localized(localized, result.localized)
            written.append(localized)
    except CollapseError as exc:
        reporter.error(str(exc))
        if exc.partial:
            reporter.partial(exc.partial)
        ctx.exit(EXIT_COLLAPSE)
    except (GridPersistError, ValueError, OSError) as exc:
        logger.debug("compute failed", exc_info=True)
        reporter.error(str(exc))
        ctx.exit(EXIT_ERROR)

    reporter.summary(
        {
            "points": len(points),
            "workers": config.grid.workers,
            "expansion rounds": result.stats.get("rounds"),
            "withheld generators": result.stats.get("withheld"),
            "messages": result.stats.get("messages"),
        }
    )
    for zone in result.stats.get("disconnected", []):
        reporter.warning(f"Subcomplex of zone {zone} is not connected")
    reporter.info("Wrote " + ", ".join(path.name for path in written))
    reporter.barcodes(result.barcodes)
    if timings:
        reporter.timings(result.timings)
    if do_compare:
        outcome = compare(result.barcodes, sequential_persistence(points), tolerance)
        if not outcome:
            reporter.error(outcome.describe())
            ctx.exit(EXIT_ERROR)
        reporter.success(outcome.describe())


@main.command()
@click.option("--input", "input_path", type=_INPUT, required=True, help="Point file, one 'x y' per line.")
@click.option("--output", type=_DIR, default=Path(), show_default=True)
@click.option("--plot", type=_FILE, default=None, help="Write an SVG barcode plot.")
@click.pass_context
def oracle(ctx: click.Context, input_path: Path, output: Path, plot: Path | None) -> None:
    """Sequential barcodes from the full triangulation."""
    reporter: Reporter = ctx.obj
    reporter.header("oracle", str(input_path))
    try:
        barcodes = sequential_persistence(read_points(input_path))
        written = write_outputs(barcodes, output, plot)
    except (GridPersistError, ValueError, OSError) as exc:
        reporter.error(str(exc))
        ctx.exit(EXIT_ERROR)
    reporter.barcodes(barcodes)
    reporter.info("Wrote " + ", ".join(path.name for path in written))
