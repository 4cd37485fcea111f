"""Point cloud generators and the plain-text point and barcode formats."""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from pathlib import Path

import numpy as np

from gridpersist.barcode_algebra import Interval, standard_key
from gridpersist.errors import ParseError
from gridpersist.geometry import Point2

PointCloud = dict[int, Point2]


def _cloud(coords: np.ndarray) -> PointCloud:
    return {k: Point2(float(x), float(y)) for k, (x, y) in enumerate(coords.tolist())}


def uniform_square(n: int, seed: int | None = None, side: float = 1.0) -> PointCloud:
    """``n`` points drawn uniformly from ``[0, side)^2``."""
    rng = np.random.default_rng(seed)
    return _cloud(rng.uniform(0.0, side, size=(n, 2)))


def noisy_circle(
    n: int, seed: int | None = None, radius: float = 1.0, noise: float = 0.1
) -> PointCloud:
    """``n`` points on a circle with Gaussian radial noise."""
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, 2 * math.pi, size=n)
    r = radius + rng.normal(0.0, noise, size=n)
    return _cloud(np.column_stack((r * np.cos(theta), r * np.sin(theta))))


def concentric_rings(
    n: int, seed: int | None = None, radii: tuple[float, ...] = (1.0, 2.0), noise: float = 0.05
) -> PointCloud:
    """``n`` points split evenly over noisy rings sharing a center."""
    rng = np.random.default_rng(seed)
    parts = []
    for k, radius in enumerate(radii):
        count = n // len(radii) + (1 if k < n % len(radii) else 0)
        theta = rng.uniform(0.0, 2 * math.pi, size=count)
        r = radius + rng.normal(0.0, noise, size=count)
        parts.append(np.column_stack((r * np.cos(theta), r * np.sin(theta))))
    return _cloud(np.concatenate(parts))


def four_circles(
    n: int, seed: int | None = None, radius: float = 1.0, spacing: float = 3.0, noise: float = 0.05
) -> PointCloud:
    """Noisy circles centered on the corners of a square.

    With the default spacing a 2x2 grid gives each zone one whole circle.
    """
    rng = np.random.default_rng(seed)
    centers = [(0.0, 0.0), (spacing, 0.0), (0.0, spacing), (spacing, spacing)]
    parts = []
    for k, (cx, cy) in enumerate(centers):
        count = n // 4 + (1 if k < n % 4 else 0)
        theta = rng.uniform(0.0, 2 * math.pi, size=count)
        r = radius + rng.normal(0.0, noise, size=count)
        parts.append(np.column_stack((cx + r * np.cos(theta), cy + r * np.sin(theta))))
    return _cloud(np.concatenate(parts))


def format_value(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.17g}"


def _parse_float(token: str, line: int, path: str | None) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"'{token}' is not a number", line, path) from None
    if not math.isfinite(value) and token.lower() != "inf":
        raise ParseError(f"'{token}' is not a finite number", line, path)
    return value


def parse_points(text: str, path: str | None = None) -> PointCloud:
    """Parse one ``x y`` pair per line; ``#`` lines and blank lines are skipped.

    Raises:
        ParseError: On a malformed line or a repeated point
    """
    points: PointCloud = {}
    seen: dict[tuple[float, float], int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected two coordinates, got {len(tokens)} fields", line_no, path)
        x, y = (_parse_float(t, line_no, path) for t in tokens)
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ParseError("coordinates must be finite", line_no, path)
        if (x, y) in seen:
            raise ParseError(f"duplicate of the point on line {seen[(x, y)]}", line_no, path)
        seen[(x, y)] = line_no
        points[len(points)] = Point2(x, y)
    return points


def read_points(path: str | Path) -> PointCloud:
    path = Path(path)
    return parse_points(path.read_text(), str(path))


def write_points(path: str | Path, points: Mapping[int, Point2]) -> None:
    lines = [f"{format_value(p.x)} {format_value(p.y)}" for _, p in sorted(points.items())]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def format_barcode(dim: int, intervals: Iterable[Interval]) -> str:
    """One ``dim birth death`` line per nonempty bar, in standard order."""
    bars = sorted((iv for iv in intervals if not iv.is_empty), key=standard_key)
    return "".join(f"{dim} {format_value(iv.birth)} {format_value(iv.death)}\n" for iv in bars)


def write_barcode(path: str | Path, dim: int, intervals: Iterable[Interval]) -> None:
    Path(path).write_text(format_barcode(dim, intervals))


def parse_barcode(text: str, path: str | None = None) -> dict[int, list[Interval]]:
    """Parse ``dim birth death`` lines.

    Raises:
        ParseError: On a malformed line or a bar that dies before it is born
    """
    barcodes: dict[int, list[Interval]] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 3 or not tokens[0].isdigit():
            raise ParseError("expected 'dim birth death'", line_no, path)
        birth, death = (_parse_float(t, line_no, path) for t in tokens[1:])
        try:
            interval = Interval(birth, death)
        except ValueError as exc:
            raise ParseError(str(exc), line_no, path) from None
        barcodes.setdefault(int(tokens[0]), []).append(interval)
    return barcodes


def read_barcode(path: str | Path) -> dict[int, list[Interval]]:
    path = Path(path)
    return parse_barcode(path.read_text(), str(path))
