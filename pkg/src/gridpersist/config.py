"""Run configuration for the distributed pipeline."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

DEFAULT_TOLERANCE = 1e-8

DENSITY_PRESETS: dict[str, int] = {"coarse": 30, "default": 1000}

_GRID_PATTERN = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")


@dataclass(frozen=True)
class GridConfig:
    """Shape of the rectilinear cover.

    Args:
        m1: Zones along the x axis
        m2: Zones along the y axis
        density: Target average number of points per grid cell

    Raises:
        ValueError: If any field is not a positive integer

    Example:
        >>> GridConfig.parse("2x3").workers
        6
    """

    m1: int = 1
    m2: int = 1
    density: int = DENSITY_PRESETS["default"]

    def __post_init__(self) -> None:
        for name in ("m1", "m2", "density"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    @property
    def workers(self) -> int:
        """Number of zones, one worker per zone."""
        return self.m1 * self.m2

    @classmethod
    def parse(cls, text: str, density: int | None = None) -> GridConfig:
        """Build a grid from an ``M1xM2`` string."""
        match = _GRID_PATTERN.match(text)
        if match is None:
            raise ValueError(f"Grid must look like M1xM2, got '{text}'")
        m1, m2 = int(match.group(1)), int(match.group(2))
        if density is None:
            return cls(m1, m2)
        return cls(m1, m2, density)


@dataclass(frozen=True)
class RunConfig:
    """Options for one distributed run.

    Args:
        grid: Cover shape and cell density
        optimised_entries: Withhold generators that enter no differential
        seed: Seed of the delivery-order fuzzer; None delivers in send order
        threads: Worker threads per phase; 1 runs workers inline
        tolerance: Absolute tolerance for barcode comparisons
    """

    grid: GridConfig = field(default_factory=GridConfig)
    optimised_entries: bool = True
    seed: int | None = None
    threads: int = 1
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self) -> None:
        if not isinstance(self.threads, int) or self.threads < 1:
            raise ValueError(f"threads must be an integer >= 1, got {self.threads!r}")
        if self.tolerance < 0:
            raise ValueError(f"tolerance must be >= 0, got {self.tolerance}")
