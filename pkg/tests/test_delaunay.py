"""Tests for the incremental Delaunay triangulation."""

import itertools

import numpy as np
import pytest

from gridpersist.datasets import uniform_square
from gridpersist.delaunay import build, insert, insertion_order, is_delaunay
from gridpersist.errors import DuplicatePointError
from gridpersist.geometry import Point2, circumdata_triangle, in_circle


def euler_ok(tri) -> bool:
    """Whether v - e + t == 1 for a triangulated disk."""
    return len(tri.vertices) - len(tri.edges()) + len(tri.triangles) == 1


class TestBuild:
    """Test building triangulations from scratch."""

    def test_three_points(self):
        """Test that three points give one triangle."""
        tri = build({0: Point2(0, 0), 1: Point2(1, 0), 2: Point2(0, 1)})
        assert tri.triangles == frozenset({(0, 1, 2)})
        assert tri.edges() == frozenset({(0, 1), (0, 2), (1, 2)})

    def test_unit_square(self):
        """Test that four cocircular corners give two triangles on one diagonal."""
        square = {0: Point2(0, 0), 1: Point2(1, 0), 2: Point2(1, 1), 3: Point2(0, 1)}
        tri = build(square)
        assert len(tri.triangles) == 2
        diagonals = {(0, 2), (1, 3)} & tri.edges()
        assert len(diagonals) == 1

    def test_unit_square_order_independent(self):
        """Test that the tie-break depends on ids, not insertion order."""
        square = {0: Point2(0, 0), 1: Point2(1, 0), 2: Point2(1, 1), 3: Point2(0, 1)}
        expected = build(square).triangles
        for perm in itertools.permutations(square):
            tri = build({})
            for pid in perm:
                tri.insert({pid: square[pid]})
            assert tri.triangles == expected

    def test_collinear_has_edges_only(self):
        """Test that collinear points form a path of edges."""
        tri = build({k: Point2(float(k), 2.0 * k) for k in range(4)})
        assert tri.triangles == frozenset()
        assert tri.edges() == frozenset({(0, 1), (1, 2), (2, 3)})

    def test_duplicate_rejected(self):
        """Test that two ids at the same coordinates raise."""
        with pytest.raises(DuplicatePointError) as info:
            build({0: Point2(0, 0), 1: Point2(1, 0), 2: Point2(0, 0)})
        assert {info.value.first, info.value.second} == {0, 2}

    def test_random_empty_circumcircles(self):
        """Test that no point lies strictly inside any circumcircle."""
        points = uniform_square(50, seed=7)
        tri = build(points)
        for t in tri.triangles:
            a, b, c = (points[i] for i in t)
            for pid, p in points.items():
                if pid not in t:
                    assert in_circle(a, b, c, p) <= 0

    def test_euler_relation(self):
        """Test v - e + t = 1 on random clouds."""
        for seed in range(5):
            assert euler_ok(build(uniform_square(80, seed=seed)))

    def test_insertion_order_covers_ids(self):
        """Test that the insertion order is a permutation of the ids."""
        points = uniform_square(40, seed=1)
        assert sorted(insertion_order(points, points)) == sorted(points)


class TestInsert:
    """Test inserting points into an existing triangulation."""

    def test_insert_nothing(self):
        """Test that inserting no points leaves the triangles unchanged."""
        tri = build(uniform_square(20, seed=2))
        before = tri.triangles
        assert insert(tri, {}).triangles == before

    def test_insert_interior_point(self):
        """Test that an interior point adds two triangles."""
        tri = build({0: Point2(0, 0), 1: Point2(4, 0), 2: Point2(0, 4)})
        insert(tri, {3: Point2(1, 1)})
        assert len(tri.triangles) == 3
        assert (0, 1, 2) not in tri.triangles

    def test_split_equals_build_all(self):
        """Test that build-then-insert equals building from the union."""
        points = uniform_square(60, seed=5)
        first = {k: p for k, p in points.items() if k < 40}
        rest = {k: p for k, p in points.items() if k >= 40}
        assert insert(build(first), rest).triangles == build(points).triangles

    def test_insert_outside_hull(self):
        """Test inserting points that grow the hull."""
        points = uniform_square(30, seed=9)
        far = {100: Point2(5.0, 5.0), 101: Point2(-3.0, 0.5)}
        tri = insert(build(points), far)
        assert tri.triangles == build({**points, **far}).triangles
        assert euler_ok(tri)


class TestIsDelaunay:
    """Test the empty-circumcircle check."""

    def test_own_vertices(self):
        """Test that a triangle's own vertices never violate it."""
        tri = build({0: Point2(0, 0), 1: Point2(1, 0), 2: Point2(0, 1)})
        assert all(is_delaunay(tri, tri.points).values())

    def test_circumcenter_witness(self):
        """Test that a witness at the circumcenter fails the triangle."""
        pts = {0: Point2(0, 0), 1: Point2(1, 0), 2: Point2(0, 1)}
        tri = build(pts)
        center = circumdata_triangle(*pts.values()).center
        assert is_delaunay(tri, {9: center}) == {(0, 1, 2): False}

    @pytest.mark.parametrize("seed", range(100))
    def test_random_clouds(self, seed):
        """Test every triangle of a built cloud against all its points."""
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 40))
        points = uniform_square(n, seed=seed)
        tri = build(points)
        assert all(is_delaunay(tri, points).values())
        assert euler_ok(tri)
