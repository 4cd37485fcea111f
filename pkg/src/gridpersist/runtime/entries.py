"""Optimised first-page entries and the final barcode gather."""

from __future__ import annotations

import logging
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass

from gridpersist.barcode_algebra import BasisElement, Interval, standard_key
from gridpersist.errors import InconsistencyError
from gridpersist.spectral import InclusionBlock, term_name

logger = logging.getLogger(__name__)

Barcodes = dict[int, list[Interval]]


@dataclass(frozen=True)
class LocalizedInterval:
    """A final bar with the place it came from.

    Attributes:
        dim: Homology degree
        interval: The bar
        origin: Second-page term name, or ``withheld:[i]`` for a bar kept by zone ``i``
    """

    dim: int
    interval: Interval
    origin: str


def apply_optimised_entries(
    barcode: Sequence[BasisElement], blocks: Iterable[InclusionBlock]
) -> tuple[list[BasisElement], list[BasisElement]]:
    """Split a zone's own barcode into shipped and withheld generators.

    A generator is withheld when its row is zero in every block into the zone.

    Args:
        barcode: Generators of ``PH_q(A_i)``
        blocks: Blocks ``[i] <- [i, j]`` of the same degree

    Returns:
        The generators to ship and the generators to keep
    """
    used: set[Hashable] = set()
    for block in blocks:
        rows = block.matrix.rows.elements
        for column in block.matrix.matrix.columns:
            used.update(rows[r].key for r in column)
    shipped = [g for g in barcode if g.key in used]
    withheld = [g for g in barcode if g.key not in used]
    return shipped, withheld


def origin_of(key: Hashable) -> str:
    """Where a final generator came from, read off its key."""
    head = key[0]  # type: ignore[index]
    if head == "B":
        return term_name(1, 0)
    if isinstance(head, str):
        return head
    return f"withheld:[{','.join(str(z) for z in head)}]"


def sort_intervals(intervals: Iterable[Interval]) -> list[Interval]:
    return sorted(intervals, key=standard_key)


def gather(
    streams: Iterable[tuple[int, Iterable[BasisElement]]],
) -> tuple[Barcodes, list[LocalizedInterval]]:
    """Merge every stream of final generators into the output barcodes.

    Args:
        streams: ``(dim, generators)`` pairs; empty intervals are dropped

    Raises:
        InconsistencyError: If a generator key turns up twice in a degree
    """
    seen: dict[int, set[Hashable]] = {0: set(), 1: set()}
    localized: list[LocalizedInterval] = []
    for dim, generators in streams:
        keys = seen.setdefault(dim, set())
        for g in generators:
            if g.key in keys:
                raise InconsistencyError(f"Generator {g.key} gathered twice in degree {dim}")
            keys.add(g.key)
            if not g.interval.is_empty:
                localized.append(LocalizedInterval(dim, g.interval, origin_of(g.key)))
    localized.sort(key=lambda li: (li.dim, *standard_key(li.interval), li.origin))
    barcodes: Barcodes = {0: [], 1: []}
    for li in localized:
        barcodes.setdefault(li.dim, []).append(li.interval)
    logger.info(
        "Gathered %s",
        ", ".join(f"{len(v)} bars in degree {d}" for d, v in sorted(barcodes.items())),
    )
    return barcodes, localized
