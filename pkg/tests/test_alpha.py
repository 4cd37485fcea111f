"""Tests for alpha filtration values and their reconciliation across zones."""

import pytest

from gridpersist.alpha import (
    NonGabrielEdge,
    alpha_values,
    closure,
    faces,
    filtration_key,
    global_alpha,
    intersection_alpha_and_critical,
    local_alpha_with_list,
    merge_critical,
    reconcile,
    triangulation_simplices,
)
from gridpersist.cover import decompose
from gridpersist.datasets import uniform_square
from gridpersist.delaunay import build
from gridpersist.errors import InconsistencyError
from gridpersist.geometry import Point2

RIGHT = {0: Point2(0, 0), 1: Point2(1, 0), 2: Point2(0, 1)}
OBTUSE = {0: Point2(0, 0), 1: Point2(4, 0), 2: Point2(2, 0.5)}


class TestSimplices:
    """Test simplex helpers."""

    def test_faces(self):
        """Test codimension-one faces."""
        assert faces((0, 1, 2)) == [(0, 1), (0, 2), (1, 2)]
        assert faces((3, 7)) == [(3,), (7,)]
        assert faces((5,)) == []

    def test_closure(self):
        """Test that closure adds every face and sorts vertices."""
        assert closure([(2, 0, 1)]) == {
            (0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2),
        }

    def test_filtration_key_breaks_ties_by_dimension(self):
        """Test that a face sorts before a coface at the same value."""
        assert filtration_key((0, 1), 0.5) < filtration_key((0, 1, 2), 0.5)
        assert filtration_key((0, 2), 0.5) > filtration_key((0, 1), 0.5)


class TestAlphaValues:
    """Test filtration values of small complexes."""

    def test_right_triangle(self):
        """Test that the hypotenuse meets the triangle and the legs come first."""
        fc = global_alpha(build(RIGHT))
        assert fc.value((0, 1, 2)) == pytest.approx(0.5)
        assert fc.value((1, 2)) == pytest.approx(0.5)
        assert fc.value((0, 1)) == pytest.approx(0.25)
        assert fc.value((0, 2)) == pytest.approx(0.25)
        assert all(fc.value((v,)) == 0.0 for v in RIGHT)

    def test_obtuse_triangle_long_edge_is_attached(self):
        """Test that the long edge of an obtuse triangle takes the triangle value."""
        fc, non_gabriel = alpha_values(closure([(0, 1, 2)]), OBTUSE)
        assert fc.value((0, 1, 2)) == pytest.approx(18.0625)
        assert fc.value((0, 1)) == fc.value((0, 1, 2))
        assert non_gabriel == {(0, 1): NonGabrielEdge(fc.value((0, 1, 2)), (0, 1, 2))}

    def test_ordered_is_monotone(self):
        """Test that no face comes after one of its cofaces."""
        fc = global_alpha(build(uniform_square(150, seed=4)))
        position = {s: k for k, s in enumerate(fc.ordered())}
        for s in fc:
            for f in faces(s):
                assert position[f] < position[s]
        assert fc.monotonicity_violations() == []

    def test_simplices_by_dimension(self):
        """Test counts per dimension on a triangle."""
        fc = global_alpha(build(RIGHT))
        assert [len(fc.simplices(d)) for d in range(3)] == [3, 3, 1]

    def test_restrict(self):
        """Test that restriction keeps values."""
        fc = global_alpha(build(RIGHT))
        sub = fc.restrict([(0,), (1,), (0, 1)])
        assert len(sub) == 3
        assert sub.value((0, 1)) == fc.value((0, 1))

    def test_isolated_vertices_included(self):
        """Test that collinear input still yields vertices and edges."""
        tri = build({k: Point2(float(k), 0.0) for k in range(3)})
        simplices = triangulation_simplices(tri)
        assert {(0,), (1,), (2,), (0, 1), (1, 2)} == simplices


class TestCriticalEdges:
    """Test the critical non-Gabriel edge lists."""

    def test_blocker_outside_intersection_is_critical(self):
        """Test that an edge whose blocker is not shared is flagged."""
        _, non_gabriel = local_alpha_with_list(closure([(0, 1, 2)]), OBTUSE)
        fc, critical = intersection_alpha_and_critical(
            {(0,), (1,), (0, 1)}, OBTUSE, non_gabriel
        )
        assert critical == {(0, 1): pytest.approx(18.0625)}
        assert fc.value((0, 1)) == pytest.approx(18.0625)

    def test_blocker_inside_intersection_is_not_critical(self):
        """Test that an edge whose blocker is shared is not flagged."""
        _, non_gabriel = local_alpha_with_list(closure([(0, 1, 2)]), OBTUSE)
        _, critical = intersection_alpha_and_critical(closure([(0, 1, 2)]), OBTUSE, non_gabriel)
        assert critical == {}

    def test_merge_conflict(self):
        """Test that two different values for one edge raise."""
        with pytest.raises(InconsistencyError, match=r"\(0, 1\)"):
            merge_critical([{(0, 1): 1.0}, {(0, 1): 2.0}])

    def test_merge_union(self):
        """Test that agreeing lists merge."""
        assert merge_critical([{(0, 1): 1.0}, {(0, 1): 1.0, (2, 3): 4.0}]) == {
            (0, 1): 1.0,
            (2, 3): 4.0,
        }

    def test_reconcile_counts_changes(self):
        """Test that reconcile overwrites and counts stale values."""
        fc, _ = alpha_values({(0,), (1,), (0, 1)}, OBTUSE)
        assert fc.value((0, 1)) == pytest.approx(4.0)
        assert reconcile([fc], [{(0, 1): 18.0625}]) == 1
        assert fc.value((0, 1)) == 18.0625
        assert reconcile([fc], [{(0, 1): 18.0625}]) == 0


class TestReconciledZones:
    """Test that reconciled local values agree with the global filtration."""

    @pytest.mark.parametrize(("m1", "m2", "seed"), [(2, 2, 1), (2, 2, 8), (3, 2, 5)])
    def test_local_equals_global(self, m1, m2, seed):
        """Test every simplex of every zone and intersection."""
        points = uniform_square(300, seed=seed)
        cover = decompose(points, m1, m2, density=20)
        expected = global_alpha(build(points))
        complexes = []
        lists = []
        for zone, k in cover.subcomplexes.items():
            fc, non_gabriel = local_alpha_with_list(k.simplices, k.points)
            complexes.append(fc)
            for zones, inter in cover.intersections.items():
                if zone in zones:
                    fc_sigma, critical = intersection_alpha_and_critical(
                        inter.simplices, k.points, non_gabriel
                    )
                    complexes.append(fc_sigma)
                    lists.append(critical)
        reconcile(complexes, lists)
        for fc in complexes:
            for s in fc:
                assert fc.value(s) == expected.value(s), s

    def test_blocker_seen_by_one_zone(self):
        """Test a shared long edge whose blocking vertex only one zone holds."""
        points = {0: Point2(0, 0), 1: Point2(4, 0), 2: Point2(2, 0.5), 3: Point2(2, -10)}
        expected = global_alpha(build(points))
        above, above_list = local_alpha_with_list(closure([(0, 1, 2)]), points)
        below, below_list = local_alpha_with_list(closure([(0, 1, 3)]), points)
        assert below.value((0, 1)) == pytest.approx(4.0)
        shared = {(0,), (1,), (0, 1)}
        from_above, critical_above = intersection_alpha_and_critical(shared, points, above_list)
        from_below, critical_below = intersection_alpha_and_critical(shared, points, below_list)
        assert critical_below == {}
        assert set(critical_above) == {(0, 1)}
        reconcile([above, below, from_above, from_below], [critical_above, critical_below])
        for fc in (above, below, from_above, from_below):
            for s in fc:
                assert fc.value(s) == expected.value(s), s
