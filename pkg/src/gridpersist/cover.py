"""Grid cover of the point cloud and the subcomplexes it induces."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal

import numpy as np

from gridpersist.alpha import Simplex, closure
from gridpersist.delaunay import Triangulation, build
from gridpersist.errors import ExpansionError, GridPersistError
from gridpersist.geometry import BoundingBox, Point2, circumdata_triangle, orientation

logger = logging.getLogger(__name__)

RELATIVE_MARGIN = 1e-9
_DISK_SLACK = 1e-9

TriangleClass = Literal["inner", "boundary", "outer"]
Zones = tuple[int, ...]
CellRange = tuple[int, int, int, int]


@dataclass(frozen=True)
class GridSpec:
    """Rectilinear grid of cells grouped into ``m1 x m2`` zones.

    Zone ``i`` sits in column ``i % m1`` and row ``i // m1``. Each zone holds
    ``kx x ky`` cells. Boundaries are listed explicitly so zone edges are
    shared exactly by the cells on either side.

    Attributes:
        m1: Zones along x
        m2: Zones along y
        density: Target average points per cell
        box: Padded global box
        x_edges: Cell boundaries along x, ``m1 * kx + 1`` values
        y_edges: Cell boundaries along y, ``m2 * ky + 1`` values
    """

    m1: int
    m2: int
    density: int
    kx: int
    ky: int
    box: BoundingBox
    x_edges: tuple[float, ...]
    y_edges: tuple[float, ...]

    @property
    def workers(self) -> int:
        return self.m1 * self.m2

    @property
    def nx(self) -> int:
        return self.m1 * self.kx

    @property
    def ny(self) -> int:
        return self.m2 * self.ky

    @property
    def cell_size(self) -> tuple[float, float]:
        return (
            (self.box.x_max - self.box.x_min) / self.nx,
            (self.box.y_max - self.box.y_min) / self.ny,
        )

    def cell_of(self, p: Point2) -> tuple[int, int]:
        cx = int(np.searchsorted(self.x_edges[1:-1], p.x, side="right"))
        cy = int(np.searchsorted(self.y_edges[1:-1], p.y, side="right"))
        return cx, cy

    def zone_of_cell(self, cell: tuple[int, int]) -> int:
        return (cell[1] // self.ky) * self.m1 + cell[0] // self.kx

    def zone_of(self, p: Point2) -> int:
        """Zone holding ``p`` under the half-open rule."""
        return self.zone_of_cell(self.cell_of(p))

    def zone_cells(self, zone: int) -> CellRange:
        """Cell range ``(x0, x1, y0, y1)``, end-exclusive, covered by a zone."""
        zx, zy = zone % self.m1, zone // self.m1
        return (zx * self.kx, (zx + 1) * self.kx, zy * self.ky, (zy + 1) * self.ky)

    def zone_box(self, zone: int) -> BoundingBox:
        return self.range_box(self.zone_cells(zone))

    def range_box(self, cells: CellRange) -> BoundingBox:
        x0, x1, y0, y1 = cells
        return BoundingBox(self.x_edges[x0], self.x_edges[x1], self.y_edges[y0], self.y_edges[y1])

    def grow(self, cells: CellRange) -> CellRange:
        """Cell range one ring larger, clipped to the grid."""
        x0, x1, y0, y1 = cells
        return (max(x0 - 1, 0), min(x1 + 1, self.nx), max(y0 - 1, 0), min(y1 + 1, self.ny))

    def reach(self, zone: int, rounds: int) -> CellRange:
        """Cell range of a zone after ``rounds`` expansion rounds."""
        cells = self.zone_cells(zone)
        for _ in range(rounds):
            cells = self.grow(cells)
        return cells

    def ring(self, zone: int, rounds: int) -> set[tuple[int, int]]:
        """Cells a zone receives in the round after ``rounds`` completed ones."""
        x0, x1, y0, y1 = self.reach(zone, rounds)
        g0, g1, h0, h1 = self.grow((x0, x1, y0, y1))
        return {
            (cx, cy)
            for cx in range(g0, g1)
            for cy in range(h0, h1)
            if not (x0 <= cx < x1 and y0 <= cy < y1)
        }

    def covers_all(self, cells: CellRange) -> bool:
        return cells == (0, self.nx, 0, self.ny)

    def outside_strips(self, cells: CellRange) -> list[BoundingBox]:
        """Rectangles covering the global box minus a cell range."""
        x0, x1, y0, y1 = cells
        strips = []
        if x0 > 0:
            strips.append(self.range_box((0, x0, 0, self.ny)))
        if x1 < self.nx:
            strips.append(self.range_box((x1, self.nx, 0, self.ny)))
        if y0 > 0:
            strips.append(self.range_box((x0, x1, 0, y0)))
        if y1 < self.ny:
            strips.append(self.range_box((x0, x1, y1, self.ny)))
        return strips


@dataclass
class ZoneAssignment:
    """Partition of the point ids among zones.

    Attributes:
        zones: Point ids of each zone
        boxes: Box of each zone
        cells: Point ids per occupied cell
    """

    zones: list[frozenset[int]]
    boxes: list[BoundingBox]
    cells: dict[tuple[int, int], list[int]] = field(default_factory=dict)

    def zone_index(self) -> dict[int, int]:
        return {pid: z for z, ids in enumerate(self.zones) for pid in ids}


def _split(lo: float, hi: float, parts: int, sub: int) -> tuple[float, ...]:
    zone_edges = [lo + (hi - lo) * k / parts for k in range(parts)] + [hi]
    edges: list[float] = []
    for a, b in zip(zone_edges, zone_edges[1:], strict=False):
        edges.extend(a + (b - a) * j / sub for j in range(sub))
    edges.append(hi)
    return tuple(edges)


def compute_grid(
    points: Mapping[int, Point2], m1: int, m2: int, density: int
) -> tuple[BoundingBox, GridSpec, ZoneAssignment]:
    """Pad the bounding box, lay out cells and assign points to zones.

    Raises:
        ValueError: If there are no points or a grid parameter is not positive
    """
    if not points:
        raise ValueError("Cannot build a grid over an empty point set")
    if m1 < 1 or m2 < 1 or density < 1:
        raise ValueError(f"Grid needs positive m1, m2, density, got {m1}, {m2}, {density}")
    ids = sorted(points)
    coords = np.array([(points[i].x, points[i].y) for i in ids])
    lo = coords.min(axis=0)
    hi = coords.max(axis=0)
    diameter = float(np.hypot(*(hi - lo))) or 1.0
    pad = RELATIVE_MARGIN * diameter
    box = BoundingBox(float(lo[0]) - pad, float(hi[0]) + pad, float(lo[1]) - pad, float(hi[1]) + pad)

    width, height = box.x_max - box.x_min, box.y_max - box.y_min
    per_zone = max(1.0, len(ids) / density / (m1 * m2))
    aspect = (width / m1) / (height / m2)
    kx = max(1, round(math.sqrt(per_zone * aspect)))
    ky = max(1, round(per_zone / kx))
    grid = GridSpec(
        m1, m2, density, kx, ky, box,
        _split(box.x_min, box.x_max, m1, kx),
        _split(box.y_min, box.y_max, m2, ky),
    )

    cx = np.searchsorted(np.array(grid.x_edges[1:-1]), coords[:, 0], side="right")
    cy = np.searchsorted(np.array(grid.y_edges[1:-1]), coords[:, 1], side="right")
    zone = (cy // ky) * m1 + cx // kx
    members: list[set[int]] = [set() for _ in range(m1 * m2)]
    cells: dict[tuple[int, int], list[int]] = {}
    for pid, x, y, z in zip(ids, cx.tolist(), cy.tolist(), zone.tolist(), strict=True):
        members[z].add(pid)
        cells.setdefault((x, y), []).append(pid)
    assignment = ZoneAssignment(
        [frozenset(m) for m in members],
        [grid.zone_box(z) for z in range(m1 * m2)],
        cells,
    )
    logger.debug(
        "Grid %dx%d with %dx%d cells per zone, zone sizes %s",
        m1, m2, kx, ky, [len(m) for m in members],
    )
    return box, grid, assignment


def classify_triangle(
    triangle: Iterable[int], zone: int, zone_of: Mapping[int, int]
) -> TriangleClass:
    """Inner if every vertex lies in the zone, boundary if some do, else outer."""
    hits = sum(1 for v in triangle if zone_of[v] == zone)
    if hits == 3:
        return "inner"
    return "boundary" if hits else "outer"


@dataclass
class SubcomplexK:
    """The subcomplex of a zone: its inner and boundary triangles with faces.

    Attributes:
        zone: Zone id
        simplices: Every simplex of the subcomplex
        classification: Inner or boundary, per triangle
        points: Coordinates of the vertices known to the zone's worker
        cells: Cell range reached by the expansion
        rounds: Expansion rounds performed
    """

    zone: int
    simplices: frozenset[Simplex]
    classification: dict[Simplex, TriangleClass]
    points: dict[int, Point2]
    cells: CellRange
    rounds: int

    @property
    def triangles(self) -> list[Simplex]:
        return sorted(self.classification)

    def boundary_triangles(self) -> list[Simplex]:
        return [t for t, c in sorted(self.classification.items()) if c == "boundary"]


class ZoneExpansion:
    """Incremental construction of one zone's subcomplex.

    The triangulation of the zone's points grows by one ring of grid cells per
    round until every circumcircle of the current subcomplex stays clear of
    the part of the global box not yet covered.

    Args:
        zone: Zone id
        grid: The global grid
        own: Points of the zone, keyed by id
    """

    def __init__(self, zone: int, grid: GridSpec, own: Mapping[int, Point2]):
        self.zone = zone
        self.grid = grid
        self.own = frozenset(own)
        self.points: dict[int, Point2] = dict(own)
        self.cells = grid.zone_cells(zone)
        self.rounds = 0
        self.tri: Triangulation = build(dict(own))

    def zone_of(self, pid: int) -> int:
        return self.grid.zone_of(self.points[pid])

    def _touching(self) -> list[Simplex]:
        return [t for t in sorted(self.tri.triangles) if any(v in self.own for v in t)]

    def needs_expansion(self) -> bool:
        """Whether another ring of points could change the subcomplex."""
        if not self.own or self.grid.covers_all(self.cells):
            return False
        if not self.tri.triangles:
            return True
        strips = self.grid.outside_strips(self.cells)
        for t in self._touching():
            a, b, c = (self.points[v] for v in t)
            disk = circumdata_triangle(a, b, c)
            reach = disk.squared_radius * (1.0 + _DISK_SLACK)
            if any(s.squared_distance(disk.center) < reach for s in strips):
                return True
        for u, v in self.tri.hull_edges():
            if u not in self.own and v not in self.own:
                continue
            pu, pv = self.points[u], self.points[v]
            if any(orientation(pu, pv, corner) >= 0 for s in strips for corner in s.corners()):
                return True
        return False

    def ring_cells(self) -> set[tuple[int, int]]:
        """Cells added by the next round."""
        return self.grid.ring(self.zone, self.rounds)

    def absorb(self, layer: Mapping[int, Point2]) -> None:
        """Insert one ring of foreign points and widen the covered range."""
        fresh = {pid: p for pid, p in layer.items() if pid not in self.points}
        self.points.update(fresh)
        self.tri.insert(fresh)
        self.cells = self.grid.grow(self.cells)
        self.rounds += 1

    def subcomplex(self) -> SubcomplexK:
        """Triangles touching the zone with their faces."""
        own = self.own
        zone_of = {v: self.zone for v in own}
        classification: dict[Simplex, TriangleClass] = {}
        for t in self._touching():
            for v in t:
                zone_of.setdefault(v, -1)
            classification[t] = classify_triangle(t, self.zone, zone_of)
        simplices = closure(classification)
        simplices.update(closure(e for e in self.tri.edges() if e[0] in own or e[1] in own))
        simplices.update((v,) for v in own)
        used = {v for s in simplices for v in s}
        return SubcomplexK(
            self.zone,
            frozenset(simplices),
            classification,
            {v: self.points[v] for v in sorted(used)},
            self.cells,
            self.rounds,
        )


def expand_until_stable(
    expansion: ZoneExpansion,
    fetch: Callable[[set[tuple[int, int]]], Mapping[int, Point2]],
) -> SubcomplexK:
    """Run expansion rounds, pulling each ring of points from ``fetch``.

    Raises:
        ExpansionError: If the whole grid is covered and a round is still requested
    """
    limit = max(expansion.grid.nx, expansion.grid.ny) + 1
    while expansion.needs_expansion():
        if expansion.rounds > limit:
            raise ExpansionError(f"Zone {expansion.zone} kept expanding past the grid")
        expansion.absorb(fetch(expansion.ring_cells()))
    logger.debug("Zone %d stable after %d rounds", expansion.zone, expansion.rounds)
    return expansion.subcomplex()


def points_in_cells(
    assignment: ZoneAssignment,
    points: Mapping[int, Point2],
    cells: Iterable[tuple[int, int]],
    zone: int | None = None,
    grid: GridSpec | None = None,
) -> dict[int, Point2]:
    """Points lying in ``cells``, optionally only those owned by ``zone``."""
    out: dict[int, Point2] = {}
    for cell in cells:
        if zone is not None and grid is not None and grid.zone_of_cell(cell) != zone:
            continue
        for pid in assignment.cells.get(cell, ()):
            out[pid] = points[pid]
    return out


@dataclass(frozen=True)
class IntersectionComplex:
    """Intersection of two or three subcomplexes.

    Attributes:
        zones: Sorted zone ids
        simplices: Simplices common to all the zones' subcomplexes
        critical: Simplices that are not faces of a triangle of the intersection
    """

    zones: Zones
    simplices: frozenset[Simplex]
    critical: frozenset[Simplex] = frozenset()

    @classmethod
    def of(cls, zones: Iterable[int], simplices: Iterable[Simplex]) -> IntersectionComplex:
        simplices = frozenset(simplices)
        covered = closure(s for s in simplices if len(s) == 3)
        return cls(tuple(sorted(zones)), simplices, frozenset(simplices - covered))


def vertex_zones(k: SubcomplexK, grid: GridSpec) -> dict[int, int]:
    return {v: grid.zone_of(p) for v, p in k.points.items()}


def preliminary_intersections(
    k: SubcomplexK, grid: GridSpec
) -> tuple[dict[Zones, set[Simplex]], dict[Zones, set[Simplex]]]:
    """Shared boundary triangles (with faces) and critical simplices seen by one zone.

    Returns:
        Pairwise sets keyed by zone pairs containing ``k.zone`` and
        preliminary triples, which may not contain ``k.zone``
    """
    i = k.zone
    zone_of = vertex_zones(k, grid)
    pairs: dict[Zones, set[Simplex]] = {}
    triples: dict[Zones, set[Simplex]] = {}
    for t in k.boundary_triangles():
        others = sorted({zone_of[v] for v in t} - {i})
        shared = closure([t])
        for j in others:
            pairs.setdefault(tuple(sorted((i, j))), set()).update(shared)
        for j, l in combinations(others, 2):
            triples.setdefault(tuple(sorted((i, j, l))), set()).update(shared)
    # Critical simplices: shared by K_i with K_j and with K_l but not through
    # a triangle of K_j and K_l.
    keyed = sorted(pairs.items())
    for (zones_a, set_a), (zones_b, set_b) in combinations(keyed, 2):
        j = zones_a[0] if zones_a[1] == i else zones_a[1]
        l = zones_b[0] if zones_b[1] == i else zones_b[1]
        common = set_a & set_b
        if common:
            triples.setdefault(tuple(sorted((i, j, l))), set()).update(closure(common))
    return pairs, triples


def patch_intersections(
    zone: int,
    pairs: dict[Zones, set[Simplex]],
    triples: Iterable[tuple[Zones, Iterable[Simplex]]],
) -> tuple[list[IntersectionComplex], list[IntersectionComplex]]:
    """Fold shared triples into the pairwise sets and recompute the triples.

    Args:
        zone: The zone doing the patching
        pairs: Its pairwise sets from :func:`preliminary_intersections`
        triples: Preliminary triples containing ``zone``, from every worker

    Returns:
        Pairwise and triple intersections involving ``zone``
    """
    merged = {key: set(value) for key, value in pairs.items()}
    for zones, simplices in triples:
        if zone not in zones:
            continue
        for other in zones:
            if other != zone:
                merged.setdefault(tuple(sorted((zone, other))), set()).update(simplices)
    pairwise = [IntersectionComplex.of(z, s) for z, s in sorted(merged.items()) if s]
    partner = {
        (z.zones[0] if z.zones[1] == zone else z.zones[1]): z.simplices for z in pairwise
    }
    triple_list = []
    for j, l in combinations(sorted(partner), 2):
        common = partner[j] & partner[l]
        if common:
            triple_list.append(IntersectionComplex.of((zone, j, l), common))
    return pairwise, triple_list


@dataclass
class NerveComplex:
    """Nerve of the cover, up to triangles, in lexicographic order."""

    simplices: dict[int, list[Zones]]

    def __getitem__(self, dim: int) -> list[Zones]:
        return self.simplices.get(dim, [])

    @property
    def dimension(self) -> int:
        return max((d for d, s in self.simplices.items() if s), default=-1)

    @classmethod
    def from_simplices(cls, simplices: Iterable[Zones]) -> NerveComplex:
        by_dim: dict[int, set[Zones]] = {}
        for s in simplices:
            by_dim.setdefault(len(s) - 1, set()).add(tuple(s))
        return cls({d: sorted(v) for d, v in sorted(by_dim.items())})


def build_nerve(
    zones: Iterable[int], intersections: Iterable[IntersectionComplex]
) -> NerveComplex:
    """Nerve from the nonempty zones and nonempty intersections."""
    simplices = [(z,) for z in zones]
    simplices.extend(inter.zones for inter in intersections if inter.simplices)
    return NerveComplex.from_simplices(simplices)


def is_connected(simplices: Iterable[Simplex]) -> bool:
    """Union-find over the edges of a complex."""
    parent: dict[int, int] = {}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    simplices = list(simplices)
    for s in simplices:
        for v in s:
            parent.setdefault(v, v)
    for s in simplices:
        if len(s) == 2:
            a, b = find(s[0]), find(s[1])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return len({find(v) for v in parent}) <= 1


@dataclass
class CoverDecomposition:
    """Everything the cover protocol produces, gathered in one place."""

    grid: GridSpec
    assignment: ZoneAssignment
    subcomplexes: dict[int, SubcomplexK]
    intersections: dict[Zones, IntersectionComplex]
    nerve: NerveComplex


def decompose(points: Mapping[int, Point2], m1: int, m2: int, density: int) -> CoverDecomposition:
    """Run the cover protocol for every zone in a single process."""
    _, grid, assignment = compute_grid(points, m1, m2, density)
    subcomplexes: dict[int, SubcomplexK] = {}
    for zone, ids in enumerate(assignment.zones):
        expansion = ZoneExpansion(zone, grid, {pid: points[pid] for pid in ids})
        subcomplexes[zone] = expand_until_stable(
            expansion, lambda cells: points_in_cells(assignment, points, cells)
        )
    prelim = {z: preliminary_intersections(k, grid) for z, k in subcomplexes.items()}
    shared = [(key, simplices) for _, triples in prelim.values() for key, simplices in triples.items()]
    intersections: dict[Zones, IntersectionComplex] = {}
    for zone, (pairs, _) in prelim.items():
        pairwise, triples = patch_intersections(zone, pairs, shared)
        for inter in [*pairwise, *triples]:
            known = intersections.setdefault(inter.zones, inter)
            if known.simplices != inter.simplices:
                raise GridPersistError(f"Zones disagree on intersection {inter.zones}")
    for zone, k in subcomplexes.items():
        if k.simplices and not is_connected(k.simplices):
            logger.warning("Subcomplex of zone %d is not connected", zone)
    nerve = build_nerve(
        [z for z, k in subcomplexes.items() if k.simplices], intersections.values()
    )
    return CoverDecomposition(grid, assignment, subcomplexes, intersections, nerve)


def intersection_dimension_bound(zones_count: int) -> int:
    """Largest dimension an intersection of that many subcomplexes can have."""
    return max(5 - zones_count, 0)


__all__ = [
    "CoverDecomposition",
    "GridSpec",
    "IntersectionComplex",
    "NerveComplex",
    "SubcomplexK",
    "ZoneAssignment",
    "ZoneExpansion",
    "build_nerve",
    "classify_triangle",
    "compute_grid",
    "decompose",
    "expand_until_stable",
    "intersection_dimension_bound",
    "is_connected",
    "patch_intersections",
    "points_in_cells",
    "preliminary_intersections",
]
