"""End-to-end checks of the distributed pipeline against the sequential one."""

import time

import pytest

from gridpersist.config import DEFAULT_TOLERANCE, GridConfig, RunConfig
from gridpersist.datasets import concentric_rings, four_circles, noisy_circle, uniform_square
from gridpersist.oracle import compare, sequential_persistence
from gridpersist.runtime import run

GRIDS = ["1x1", "2x2", "2x3", "3x3"]

CLOUDS = [
    *(("uniform", 200 + 20 * seed, seed) for seed in range(10)),
    *(("circle", 200 + 20 * seed, 100 + seed) for seed in range(10)),
]


def make(kind: str, n: int, seed: int):
    if kind == "circle":
        return noisy_circle(n, seed=seed, noise=0.08)
    return uniform_square(n, seed=seed)


@pytest.mark.integration
class TestOracleEquivalence:
    """Test distributed barcodes against the sequential pipeline."""

    @pytest.mark.parametrize("grid", GRIDS)
    @pytest.mark.parametrize(("kind", "n", "seed"), CLOUDS)
    def test_exact_match(self, grid, kind, n, seed):
        """Test exact equality on seeded clouds for every grid shape."""
        points = make(kind, n, seed)
        result = run(points, RunConfig(GridConfig.parse(grid, 20), seed=seed))
        expected = sequential_persistence(points)
        assert result.barcodes == expected
        assert compare(result.barcodes, expected, DEFAULT_TOLERANCE)

    @pytest.mark.parametrize("grid", ["2x2", "3x3"])
    def test_optimised_entries_change_nothing(self, grid):
        """Test that withholding generators does not change the output."""
        points = uniform_square(300, seed=21)
        on = run(points, RunConfig(GridConfig.parse(grid, 20)))
        off = run(points, RunConfig(GridConfig.parse(grid, 20), optimised_entries=False))
        assert on.barcodes == off.barcodes
        assert on.stats["withheld"] > 0
        assert off.stats["withheld"] == 0

    def test_circles_one_per_zone(self):
        """Test four loops on a 2x2 grid, one whole circle per zone."""
        points = four_circles(400, seed=5)
        result = run(points, RunConfig(GridConfig(2, 2, 20)))
        assert result.barcodes == sequential_persistence(points)
        long_bars = [iv for iv in result.barcodes[1] if iv.death > 0.5]
        assert len(long_bars) >= 4

    def test_rings(self):
        """Test nested rings on a grid that cuts both, needing more than one expansion round."""
        points = concentric_rings(400, seed=6)
        result = run(points, RunConfig(GridConfig(3, 2, 5)))
        assert result.barcodes == sequential_persistence(points)
        assert max(result.stats["zone_rounds"]) >= 2
        assert result.stats["rounds"] == max(result.stats["zone_rounds"])

    def test_extension_produces_bars(self):
        """Test that a loop spanning every zone is recovered through the extension."""
        points = noisy_circle(300, seed=7, noise=0.03)
        result = run(points, RunConfig(GridConfig(2, 2, 20)))
        origins = {li.origin for li in result.localized if li.dim == 1 and li.interval.death > 0.1}
        assert "E2[1][0]" in origins or "E2[0][1]" in origins
        assert result.barcodes == sequential_persistence(points)


@pytest.mark.slow
@pytest.mark.integration
class TestScale:
    """Smoke test on a large cloud."""

    def test_hundred_thousand_points(self):
        """Test that 100000 uniform points finish on four workers."""
        start = time.perf_counter()
        result = run(uniform_square(100_000, seed=1), RunConfig(GridConfig(2, 2)))
        elapsed = time.perf_counter() - start
        assert elapsed < 600
        assert len(result.barcodes[0]) > 0
        assert set(result.timings) >= {"PointDistribution", "FinalBarcode"}
