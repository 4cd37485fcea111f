"""Incremental Bowyer-Watson Delaunay triangulation with ghost triangles."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Mapping

import numpy as np

from gridpersist.errors import DuplicatePointError
from gridpersist.geometry import (
    Point2,
    in_circle_perturbed,
    orientation,
    strictly_between,
)

logger = logging.getLogger(__name__)

GHOST = -1

Triangle = tuple[int, int, int]
Edge = tuple[int, int]


def _rotate(tri: Triangle) -> Triangle:
    """Rotate a CCW triple so its smallest entry comes first."""
    u, v, w = tri
    if u <= v and u <= w:
        return tri
    if v <= u and v <= w:
        return (v, w, u)
    return (w, u, v)


def insertion_order(points: Mapping[int, Point2], ids: Iterable[int]) -> list[int]:
    """Order ids along vertical strips, alternating direction per strip.

    Consecutive insertions stay close together, which keeps point-location
    walks short. The order has no effect on the resulting triangulation.
    """
    ids = sorted(ids)
    if len(ids) < 3:
        return ids
    coords = np.array([(points[i].x, points[i].y) for i in ids])
    x_min, y_min = coords.min(axis=0)
    width = max(float(coords[:, 0].max() - x_min), 1e-300)
    strips = max(1, int(math.sqrt(len(ids) / 4.0)))
    strip = np.minimum((coords[:, 0] - x_min) / width * strips, strips - 1).astype(int)
    y = coords[:, 1] - y_min
    snake = np.where(strip % 2 == 0, y, -y)
    order = np.lexsort((np.array(ids), snake, strip))
    return [ids[k] for k in order]


class Triangulation:
    """Delaunay triangulation of points carrying stable global ids.

    Triangles are stored as a map from each directed edge to the apex that
    closes a counterclockwise triangle. Hull edges are closed by the ghost
    vertex ``GHOST``, which never appears in :attr:`triangles`.

    Cocircular ties are broken by simulation of simplicity keyed on global
    ids, so the result does not depend on insertion order.

    Example:
        >>> tri = build({0: Point2(0, 0), 1: Point2(1, 0), 2: Point2(0, 1)})
        >>> tri.triangles
        frozenset({(0, 1, 2)})
    """

    def __init__(self) -> None:
        self.points: dict[int, Point2] = {}
        self._apex: dict[Edge, int] = {}
        self._by_coords: dict[tuple[float, float], int] = {}
        self._pending: list[int] = []
        self._hint: Triangle | None = None

    # Queries

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.points)

    @property
    def triangles(self) -> frozenset[Triangle]:
        """Solid triangles as sorted id triples."""
        found = set()
        for (u, v), w in self._apex.items():
            if w != GHOST and u != GHOST and v != GHOST and u < v and u < w:
                found.add(tuple(sorted((u, v, w))))
        return frozenset(found)  # type: ignore[arg-type]

    def edges(self) -> frozenset[Edge]:
        """Edges as sorted id pairs, including those of a collinear input."""
        if not self._apex:
            chain = self._collinear_chain()
            return frozenset(
                (min(a, b), max(a, b)) for a, b in zip(chain, chain[1:], strict=False)
            )
        return frozenset(
            (u, v)
            for (u, v) in self._apex
            if u != GHOST and v != GHOST and u < v
        )

    def adjacent(self, u: int, v: int) -> int | None:
        """Apex of the triangle to the left of the directed edge ``u -> v``."""
        w = self._apex.get((u, v))
        if w is None or w == GHOST:
            return None
        return w

    def hull_edges(self) -> list[Edge]:
        """Directed hull edges with the exterior on their left."""
        return sorted(
            (u, v)
            for (u, v), w in self._apex.items()
            if w == GHOST
        )

    def _collinear_chain(self) -> list[int]:
        ids = list(self._pending)
        return sorted(ids, key=lambda i: (self.points[i].x, self.points[i].y))

    # Construction

    def insert(self, points: Mapping[int, Point2]) -> Triangulation:
        """Insert points in place and return the triangulation.

        Raises:
            DuplicatePointError: If coordinates repeat under another id
            ValueError: If an id is already present
        """
        for pid, p in points.items():
            if pid in self.points:
                raise ValueError(f"Point id {pid} is already triangulated")
            key = (p.x, p.y)
            if key in self._by_coords:
                raise DuplicatePointError(self._by_coords[key], pid, p.x, p.y)
            self._by_coords[key] = pid
            self.points[pid] = p
        order = insertion_order(self.points, points)
        if not self._apex:
            self._pending.extend(order)
            self._seed()
            return self
        for pid in order:
            self._insert_one(pid)
        return self

    def _seed(self) -> None:
        """Start the triangulation from the first non-collinear triple."""
        pending = self._pending
        if len(pending) < 3:
            return
        a = pending[0]
        pa = self.points[a]
        b = pending[1]
        for c in pending[2:]:
            turn = orientation(pa, self.points[b], self.points[c])
            if turn == 0:
                continue
            if turn < 0:
                b, c = c, b
            self._add(a, b, c)
            self._add(b, a, GHOST)
            self._add(c, b, GHOST)
            self._add(a, c, GHOST)
            rest = [i for i in pending if i not in (a, b, c)]
            self._pending = []
            self._hint = (a, b, c)
            for pid in insertion_order(self.points, rest):
                self._insert_one(pid)
            return

    def _add(self, u: int, v: int, w: int) -> None:
        self._apex[(u, v)] = w
        self._apex[(v, w)] = u
        self._apex[(w, u)] = v

    def _remove(self, u: int, v: int, w: int) -> None:
        del self._apex[(u, v)]
        del self._apex[(v, w)]
        del self._apex[(w, u)]

    def _conflicts(self, tri: Triangle, pid: int) -> bool:
        u, v, w = tri
        p = self.points[pid]
        if GHOST in tri:
            a, b = (u, v) if w == GHOST else (v, w) if u == GHOST else (w, u)
            pa, pb = self.points[a], self.points[b]
            turn = orientation(pa, pb, p)
            return turn > 0 or (turn == 0 and strictly_between(pa, pb, p))
        pts = self.points
        return in_circle_perturbed(pts[u], pts[v], pts[w], p, (u, v, w, pid)) > 0

    def _start_triangle(self) -> Triangle:
        hint = self._hint
        if hint is not None and self._apex.get((hint[0], hint[1])) == hint[2]:
            return hint
        for (u, v), w in self._apex.items():
            if GHOST not in (u, v, w):
                return (u, v, w)
        raise AssertionError("triangulation has no solid triangle")

    def _locate(self, pid: int) -> Triangle:
        """Walk toward ``pid`` and return a triangle in conflict with it."""
        p = self.points[pid]
        current = self._start_triangle()
        limit = 4 * len(self._apex) + 16
        for _ in range(limit):
            u, v, w = current
            for a, b in ((u, v), (v, w), (w, u)):
                if orientation(self.points[a], self.points[b], p) < 0:
                    across = self._apex[(b, a)]
                    current = (b, a, across)
                    break
            else:
                return current
            if current[2] == GHOST:
                return current
        logger.debug("Walk for point %d did not settle; scanning", pid)
        for (u, v), w in self._apex.items():
            if self._conflicts((u, v, w), pid):
                return (u, v, w)
        raise AssertionError(f"no triangle conflicts with point {pid}")

    def _insert_one(self, pid: int) -> None:
        start = self._locate(pid)
        cavity = {_rotate(start)}
        stack = [start]
        boundary: list[Edge] = []
        while stack:
            u, v, w = stack.pop()
            for x, y in ((u, v), (v, w), (w, u)):
                z = self._apex[(y, x)]
                neighbour = (y, x, z)
                key = _rotate(neighbour)
                if key in cavity:
                    continue
                if self._conflicts(neighbour, pid):
                    cavity.add(key)
                    stack.append(neighbour)
                else:
                    boundary.append((x, y))
        for tri in cavity:
            self._remove(*tri)
        for x, y in boundary:
            self._add(x, y, pid)
            if GHOST not in (x, y):
                self._hint = (x, y, pid)


def build(points: Mapping[int, Point2]) -> Triangulation:
    """Delaunay triangulation of ``points`` keyed by global id."""
    return Triangulation().insert(points)


def insert(tri: Triangulation, new_points: Mapping[int, Point2]) -> Triangulation:
    """Insert ``new_points`` into ``tri``; equal to building from the union."""
    return tri.insert(new_points)


def is_delaunay(tri: Triangulation, witnesses: Mapping[int, Point2]) -> dict[Triangle, bool]:
    """Empty-circumcircle check of every triangle against ``witnesses``."""
    result: dict[Triangle, bool] = {}
    for t in sorted(tri.triangles):
        a, b, c = (tri.points[i] for i in t)
        result[t] = not any(
            in_circle_perturbed(a, b, c, p, (*t, wid)) > 0
            for wid, p in witnesses.items()
            if wid not in t
        )
    return result
