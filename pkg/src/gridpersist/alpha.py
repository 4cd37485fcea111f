"""Alpha filtration values on Delaunay subcomplexes."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from itertools import combinations

from gridpersist.delaunay import Triangulation
from gridpersist.errors import InconsistencyError
from gridpersist.geometry import (
    Point2,
    circumdata_edge,
    circumdata_triangle,
    in_diametral_disk,
)

logger = logging.getLogger(__name__)

Simplex = tuple[int, ...]
Edge = tuple[int, int]


def filtration_key(simplex: Simplex, value: float) -> tuple[float, int, Simplex]:
    """Total order on simplices: value, then dimension, then vertex tuple."""
    return (value, len(simplex) - 1, simplex)


def faces(simplex: Simplex) -> list[Simplex]:
    """Codimension-one faces of ``simplex`` as sorted tuples."""
    if len(simplex) == 1:
        return []
    return [tuple(f) for f in combinations(simplex, len(simplex) - 1)]


def closure(simplices: Iterable[Simplex]) -> set[Simplex]:
    """All faces of ``simplices``, the simplices included."""
    out: set[Simplex] = set()
    for s in simplices:
        s = tuple(sorted(s))
        for k in range(1, len(s) + 1):
            out.update(combinations(s, k))
    return out


@dataclass
class FilteredComplex2D:
    """Simplices of dimension at most two with filtration values.

    Values are squared radii. Vertices sit at 0, triangles and Gabriel edges at
    their squared circumradius, non-Gabriel edges at the smallest value of
    their cofaces.

    Attributes:
        values: Filtration value per sorted vertex tuple
    """

    values: dict[Simplex, float] = field(default_factory=dict)

    def __contains__(self, simplex: object) -> bool:
        return simplex in self.values

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self.values)

    def value(self, simplex: Simplex) -> float:
        return self.values[simplex]

    def simplices(self, dim: int) -> list[Simplex]:
        """Simplices of one dimension in filtration order."""
        chosen = [s for s in self.values if len(s) == dim + 1]
        return sorted(chosen, key=lambda s: filtration_key(s, self.values[s]))

    def ordered(self) -> list[Simplex]:
        """All simplices in filtration order."""
        return sorted(self.values, key=lambda s: filtration_key(s, self.values[s]))

    def restrict(self, simplices: Iterable[Simplex]) -> FilteredComplex2D:
        return FilteredComplex2D({s: self.values[s] for s in simplices})

    def monotonicity_violations(self) -> list[tuple[Simplex, Simplex]]:
        """Face/coface pairs whose values decrease along the inclusion."""
        bad = []
        for s, v in self.values.items():
            for f in faces(s):
                if f in self.values and self.values[f] > v:
                    bad.append((f, s))
        return bad


@dataclass(frozen=True)
class NonGabrielEdge:
    """An edge blocked by the opposite vertex of one of its cofaces."""

    value: float
    blocking_triangle: Simplex


def _cofaces(simplices: set[Simplex]) -> dict[Edge, list[Simplex]]:
    cofaces: dict[Edge, list[Simplex]] = {}
    for s in simplices:
        if len(s) == 3:
            for e in faces(s):
                cofaces.setdefault(e, []).append(s)  # type: ignore[arg-type]
    return cofaces


def alpha_values(
    simplices: Iterable[Simplex], points: Mapping[int, Point2]
) -> tuple[FilteredComplex2D, dict[Edge, NonGabrielEdge]]:
    """Filtration values computed as if ``simplices`` were the whole complex.

    Args:
        simplices: A simplicial complex given by its simplices (closed under faces)
        points: Coordinates of every vertex

    Returns:
        The filtered complex and the edges found non-Gabriel inside it
    """
    simplices = set(simplices)
    values: dict[Simplex, float] = {}
    non_gabriel: dict[Edge, NonGabrielEdge] = {}
    for s in simplices:
        if len(s) == 1:
            values[s] = 0.0
        elif len(s) == 3:
            a, b, c = (points[i] for i in s)
            values[s] = circumdata_triangle(a, b, c).squared_radius
    cofaces = _cofaces(simplices)
    for s in simplices:
        if len(s) != 2:
            continue
        u, v = s
        pu, pv = points[u], points[v]
        around = sorted(cofaces.get(s, []))  # type: ignore[call-overload]
        blocker = next(
            (
                t
                for t in around
                if in_diametral_disk(pu, pv, points[next(i for i in t if i not in s)])
            ),
            None,
        )
        if blocker is None:
            values[s] = circumdata_edge(pu, pv).squared_radius
        else:
            values[s] = min(values[t] for t in around)
            non_gabriel[s] = NonGabrielEdge(values[s], blocker)  # type: ignore[index]
    return FilteredComplex2D(values), non_gabriel


def triangulation_simplices(tri: Triangulation) -> set[Simplex]:
    """Every simplex of a triangulation, isolated vertices included."""
    out = closure(tri.triangles)
    out.update(tri.edges())
    out.update((v,) for v in tri.vertices)
    return out


def global_alpha(tri: Triangulation) -> FilteredComplex2D:
    """Alpha filtration of the whole Delaunay triangulation."""
    fc, _ = alpha_values(triangulation_simplices(tri), tri.points)
    return fc


def local_alpha_with_list(
    simplices: Iterable[Simplex], points: Mapping[int, Point2]
) -> tuple[FilteredComplex2D, dict[Edge, NonGabrielEdge]]:
    """Values of a local subcomplex plus its list of non-Gabriel edges."""
    fc, non_gabriel = alpha_values(simplices, points)
    logger.debug(
        "Local filtration with %d simplices, %d non-Gabriel edges",
        len(fc),
        len(non_gabriel),
    )
    return fc, non_gabriel


def intersection_alpha_and_critical(
    simplices: Iterable[Simplex],
    points: Mapping[int, Point2],
    non_gabriel: Mapping[Edge, NonGabrielEdge],
) -> tuple[FilteredComplex2D, dict[Edge, float]]:
    """Values of an intersection complex and its critical non-Gabriel edges.

    Edges listed as non-Gabriel by the owning subcomplex adopt the listed
    value. When the blocking triangle is not part of the intersection, the
    other side cannot see the blocker and the edge is flagged critical.
    """
    simplices = set(simplices)
    fc, _ = alpha_values(simplices, points)
    critical: dict[Edge, float] = {}
    for edge, record in non_gabriel.items():
        if edge not in simplices:
            continue
        fc.values[edge] = record.value
        if record.blocking_triangle not in simplices:
            critical[edge] = record.value
    return fc, critical


def merge_critical(lists: Iterable[Mapping[Edge, float]]) -> dict[Edge, float]:
    """Union of critical lists.

    Raises:
        InconsistencyError: If two lists disagree on an edge's value
    """
    merged: dict[Edge, float] = {}
    for critical in lists:
        for edge, value in critical.items():
            known = merged.setdefault(edge, value)
            if known != value:
                raise InconsistencyError(
                    f"Edge {edge} reported with values {known!r} and {value!r}"
                )
    return merged


def reconcile(
    complexes: Iterable[FilteredComplex2D], lists: Iterable[Mapping[Edge, float]]
) -> int:
    """Apply every critical value to every complex containing the edge.

    Returns:
        The number of stored values that changed
    """
    merged = merge_critical(lists)
    changed = 0
    for fc in complexes:
        for edge, value in merged.items():
            if edge in fc.values and fc.values[edge] != value:
                fc.values[edge] = value
                changed += 1
    return changed
