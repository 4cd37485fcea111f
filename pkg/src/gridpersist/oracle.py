"""Sequential reference pipeline and barcode comparison."""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from gridpersist.alpha import global_alpha
from gridpersist.barcode_algebra import Interval, standard_key
from gridpersist.config import DEFAULT_TOLERANCE
from gridpersist.delaunay import build
from gridpersist.geometry import Point2
from gridpersist.z2matrix import persistence_with_representatives

logger = logging.getLogger(__name__)

DIMENSIONS = (0, 1)


def sequential_persistence(points: Mapping[int, Point2]) -> dict[int, list[Interval]]:
    """Barcodes of the alpha filtration of the full Delaunay triangulation.

    Raises:
        ValueError: If ``points`` is empty
    """
    if not points:
        raise ValueError("Cannot compute persistence of an empty point set")
    tri = build(dict(points))
    data = persistence_with_representatives(global_alpha(tri))
    barcodes = {
        q: sorted(
            (Interval(g.birth, g.death) for g in data.generators[q] if not g.is_empty),
            key=standard_key,
        )
        for q in DIMENSIONS
    }
    logger.info(
        "Sequential persistence: %d bars in degree 0, %d in degree 1",
        len(barcodes[0]),
        len(barcodes[1]),
    )
    return barcodes


def _close(a: float, b: float, tol: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol


@dataclass(frozen=True)
class ComparisonResult:
    """Outcome of comparing two barcodes.

    Attributes:
        match: Whether every degree matched
        dim: Degree of the first mismatch
        left: Interval of the first barcode at the mismatch, None if it ran out
        right: Interval of the second barcode at the mismatch, None if it ran out
    """

    match: bool
    dim: int | None = None
    left: Interval | None = None
    right: Interval | None = None

    def __bool__(self) -> bool:
        return self.match

    def describe(self) -> str:
        if self.match:
            return "MATCH"
        return f"MISMATCH in degree {self.dim}: {self.left} vs {self.right}"


def compare(
    first: Mapping[int, Sequence[Interval]],
    second: Mapping[int, Sequence[Interval]],
    tol: float = DEFAULT_TOLERANCE,
) -> ComparisonResult:
    """Match two barcodes bar by bar after sorting both in standard order.

    Empty intervals are ignored. Infinite deaths only match infinite deaths.
    """
    for dim in sorted(set(first) | set(second)):
        left = sorted((iv for iv in first.get(dim, ()) if not iv.is_empty), key=standard_key)
        right = sorted((iv for iv in second.get(dim, ()) if not iv.is_empty), key=standard_key)
        for k in range(max(len(left), len(right))):
            a = left[k] if k < len(left) else None
            b = right[k] if k < len(right) else None
            if a is None or b is None or not (
                _close(a.birth, b.birth, tol) and _close(a.death, b.death, tol)
            ):
                logger.debug("Barcodes differ in degree %d at bar %d", dim, k)
                return ComparisonResult(False, dim, a, b)
    return ComparisonResult(True)
