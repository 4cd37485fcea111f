"""Exact planar predicates and circumcircle helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from gridpersist.errors import DegenerateGeometryError

_EPSILON = 2.0**-53
_CCW_ERRBOUND = (3.0 + 16.0 * _EPSILON) * _EPSILON
_ICC_ERRBOUND = (10.0 + 96.0 * _EPSILON) * _EPSILON


@dataclass(frozen=True, slots=True)
class Point2:
    """A point of the input cloud.

    Raises:
        ValueError: If a coordinate is NaN or infinite
    """

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Point coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True, slots=True)
class BoundingBox:
    """Axis-aligned box ``[x_min, x_max) x [y_min, y_max)``."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self) -> None:
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError(
                f"Box must have positive extent, got x=[{self.x_min}, {self.x_max}] "
                f"y=[{self.y_min}, {self.y_max}]"
            )

    def contains(self, p: Point2) -> bool:
        """Half-open membership test."""
        return self.x_min <= p.x < self.x_max and self.y_min <= p.y < self.y_max

    def squared_distance(self, center: Point2) -> float:
        """Squared distance from ``center`` to the closed box."""
        dx = max(self.x_min - center.x, 0.0, center.x - self.x_max)
        dy = max(self.y_min - center.y, 0.0, center.y - self.y_max)
        return dx * dx + dy * dy

    def corners(self) -> tuple[Point2, Point2, Point2, Point2]:
        return (
            Point2(self.x_min, self.y_min),
            Point2(self.x_max, self.y_min),
            Point2(self.x_max, self.y_max),
            Point2(self.x_min, self.y_max),
        )


@dataclass(frozen=True, slots=True)
class Circumdata:
    """Center and squared radius of a circle."""

    center: Point2
    squared_radius: float


def _sign(value: float | Fraction) -> int:
    return (value > 0) - (value < 0)


def _orientation_exact(a: Point2, b: Point2, c: Point2) -> int:
    ax, ay = Fraction(a.x), Fraction(a.y)
    det = (Fraction(b.x) - ax) * (Fraction(c.y) - ay) - (Fraction(b.y) - ay) * (
        Fraction(c.x) - ax
    )
    return _sign(det)


def orientation(a: Point2, b: Point2, c: Point2) -> int:
    """Exact sign of the orientation determinant of ``a, b, c``.

    Returns:
        +1 for a counterclockwise turn, -1 for clockwise, 0 for collinear
    """
    detleft = (a.x - c.x) * (b.y - c.y)
    detright = (a.y - c.y) * (b.x - c.x)
    det = detleft - detright
    errbound = _CCW_ERRBOUND * (abs(detleft) + abs(detright))
    if det > errbound or -det > errbound:
        return _sign(det)
    return _orientation_exact(a, b, c)


def _incircle_exact(a: Point2, b: Point2, c: Point2, d: Point2) -> int:
    dx, dy = Fraction(d.x), Fraction(d.y)
    adx, ady = Fraction(a.x) - dx, Fraction(a.y) - dy
    bdx, bdy = Fraction(b.x) - dx, Fraction(b.y) - dy
    cdx, cdy = Fraction(c.x) - dx, Fraction(c.y) - dy
    det = (
        (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy)
        + (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy)
        + (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady)
    )
    return _sign(det)


def _incircle_raw(a: Point2, b: Point2, c: Point2, d: Point2) -> int:
    """Sign of the lifted determinant; positive means inside when abc is CCW."""
    adx, ady = a.x - d.x, a.y - d.y
    bdx, bdy = b.x - d.x, b.y - d.y
    cdx, cdy = c.x - d.x, c.y - d.y

    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy

    det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    permanent = (
        (abs(bdxcdy) + abs(cdxbdy)) * alift
        + (abs(cdxady) + abs(adxcdy)) * blift
        + (abs(adxbdy) + abs(bdxady)) * clift
    )
    if det > _ICC_ERRBOUND * permanent or -det > _ICC_ERRBOUND * permanent:
        return _sign(det)
    return _incircle_exact(a, b, c, d)


def in_circle(a: Point2, b: Point2, c: Point2, d: Point2) -> int:
    """Exact position of ``d`` relative to the circle through ``a, b, c``.

    The triangle may be given in either orientation.

    Returns:
        +1 if ``d`` is strictly inside, 0 if on the circle, -1 if outside

    Raises:
        DegenerateGeometryError: If ``a, b, c`` are collinear
    """
    turn = orientation(a, b, c)
    if turn == 0:
        raise DegenerateGeometryError(f"Collinear circle points {a}, {b}, {c}")
    return turn * _incircle_raw(a, b, c, d)


def in_circle_perturbed(
    a: Point2, b: Point2, c: Point2, d: Point2, ids: tuple[int, int, int, int]
) -> int:
    """In-circle test under simulation of simplicity, never returning 0.

    Each point's lifted coordinate is raised by an infinitesimal whose
    magnitude decreases with the point's global id, so a cocircular tie is
    decided by the smallest id among the four.

    Args:
        a, b, c: Circle points in either orientation
        d: Query point
        ids: Global ids of ``a, b, c, d`` in the same order, pairwise distinct
    """
    turn = orientation(a, b, c)
    if turn == 0:
        raise DegenerateGeometryError(f"Collinear circle points {a}, {b}, {c}")
    raw = _incircle_raw(a, b, c, d)
    if raw == 0:
        # Cofactors of the lifted column; nonzero since no three cocircular
        # points are collinear.
        cofactors = (
            lambda: orientation(b, c, d),
            lambda: -orientation(a, c, d),
            lambda: orientation(a, b, d),
            lambda: -turn,
        )
        lead = min(range(4), key=ids.__getitem__)
        raw = cofactors[lead]()
    return turn * raw


def in_diametral_disk(a: Point2, b: Point2, p: Point2) -> bool:
    """Whether ``p`` lies strictly inside the circle with diameter ``ab``."""
    left = (a.x - p.x) * (b.x - p.x)
    right = (a.y - p.y) * (b.y - p.y)
    dot = left + right
    errbound = _CCW_ERRBOUND * (abs(left) + abs(right))
    if dot > errbound or -dot > errbound:
        return dot < 0
    px, py = Fraction(p.x), Fraction(p.y)
    exact = (Fraction(a.x) - px) * (Fraction(b.x) - px) + (Fraction(a.y) - py) * (
        Fraction(b.y) - py
    )
    return exact < 0


def strictly_between(a: Point2, b: Point2, p: Point2) -> bool:
    """For collinear ``a, b, p``: whether ``p`` lies in the open segment ``ab``."""
    if a.x != b.x:
        lo, hi = sorted((a.x, b.x))
        return lo < p.x < hi
    lo, hi = sorted((a.y, b.y))
    return lo < p.y < hi


def circumdata_triangle(a: Point2, b: Point2, c: Point2) -> Circumdata:
    """Circumcenter and squared circumradius of a triangle.

    Raises:
        DegenerateGeometryError: If the points are collinear
    """
    if orientation(a, b, c) == 0:
        raise DegenerateGeometryError(f"Collinear triangle {a}, {b}, {c}")
    bx, by = b.x - a.x, b.y - a.y
    cx, cy = c.x - a.x, c.y - a.y
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return Circumdata(Point2(a.x + ux, a.y + uy), ux * ux + uy * uy)


def circumdata_edge(a: Point2, b: Point2) -> Circumdata:
    """Diametral circle of an edge.

    Raises:
        DegenerateGeometryError: If the endpoints coincide
    """
    if a == b:
        raise DegenerateGeometryError(f"Edge endpoints coincide at {a}")
    dx, dy = b.x - a.x, b.y - a.y
    return Circumdata(
        Point2((a.x + b.x) / 2.0, (a.y + b.y) / 2.0), (dx * dx + dy * dy) / 4.0
    )
