from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from disjointedges.drawing import (
    AmbiguousRotation,
    Drawing,
    DrawingError,
    Labeling,
    ViolationKind,
    crossing_matrix,
    label_ccw,
    require_valid,
    select_apex,
    triangle_curve,
    triangle_twice_areas,
    validate,
)
from disjointedges.gen import convex_position, random_general_position
from disjointedges.geometry import Point, signed_area

from . import oracles

V = ViolationKind


def kinds(d):
    return validate(d).kinds()


def test_convex_pentagon_is_valid():
    assert validate(convex_position(5)).ok


def test_collinear_triple_reports_vertex_on_arc():
    d = Drawing([(0, 0), (1, 1), (2, 2)])
    assert V.VERTEX_ON_ARC_INTERIOR in kinds(d)


def test_double_crossing_is_reported():
    # arc 2-3 bulges across the straight arc 0-1 and comes back
    bulge = [(-5, 3), (2, 4), (2, 6), (-5, 7)]
    d = Drawing([(0, 0), (0, 10), (-5, 3), (-5, 7)], arcs={(2, 3): bulge})
    assert len(oracles.arc_crossings(bulge, [(0, 0), (0, 10)])) == 2
    assert V.MULTIPLE_CROSSINGS in kinds(d)


def test_adjacent_arcs_crossing():
    d = Drawing([(0, 0), (10, 0), (0, 10), (10, 10)],
                arcs={(0, 1): [(0, 0), (3, 8), (10, 0)], (0, 2): [(0, 0), (7, 3), (0, 10)]})
    assert V.ADJACENT_EDGES_CROSS in kinds(d)


def test_self_intersecting_arc():
    d = Drawing([(0, 0), (10, 0), (5, 20)], arcs={(0, 1): [(0, 0), (6, 4), (6, -4), (4, 4), (10, 0)]})
    assert V.SELF_INTERSECTION in kinds(d)


def test_tangency():
    # arc 0-1 touches arc 2-3 at (5, 5) without crossing it
    d = Drawing([(0, 0), (10, 0), (0, 5), (10, 5)], arcs={(0, 1): [(0, 0), (5, 5), (10, 0)]})
    assert V.TANGENCY_OR_OVERLAP in kinds(d) or V.JOINT_COINCIDENCE in kinds(d)


def test_crossing_at_a_joint():
    d = Drawing([(0, 0), (10, 0), (0, 5), (10, 5)],
                arcs={(0, 1): [(0, 0), (5, 5), (6, 8), (10, 0)]})
    assert V.JOINT_COINCIDENCE in kinds(d)


def test_three_concurrent_diagonals():
    # (t, t^2) for t = 1..9: chords t1-t6, t3-t7 and t4-t9 meet at (5, 29)
    d = Drawing([(t, t * t) for t in range(1, 10)])
    report = validate(d)
    assert report.kinds() == {V.TRIPLE_INTERIOR_POINT}
    hit = [v for v in report.violations if v.arcs == ((0, 5), (2, 6), (3, 8))]
    assert hit and hit[0].point == Point(5, 29)


def test_require_valid_raises():
    with pytest.raises(DrawingError):
        require_valid(Drawing([(0, 0), (1, 1), (2, 2)]))


def test_structural_errors():
    with pytest.raises(DrawingError):
        Drawing([(0, 0), (0, 0), (1, 2)])
    with pytest.raises(DrawingError):
        Drawing([(0, 0), (1, 0), (1, 2)], ids=["a", "a", "b"])
    with pytest.raises(DrawingError):
        Drawing([(0, 0), (1, 0), (1, 2)], arcs={(0, 1): [(0, 0), (5, 5), (2, 0)]})


def test_crossing_matrix_convex_quadrilateral():
    d = Drawing([(0, 0), (2, 0), (2, 2), (0, 2)])
    cm = crossing_matrix(d)
    assert cm.count((0, 2), (1, 3)) == 1
    assert cm.count((0, 1), (2, 3)) == 0
    assert cm.count((1, 3), (0, 2)) == 1
    dense = cm.to_dense()
    assert (dense == dense.T).all()


@pytest.mark.parametrize("N", range(4, 11))
def test_convex_crossing_total(N):
    assert crossing_matrix(convex_position(N)).total() == comb(N, 4)


@pytest.mark.parametrize("seed", range(6))
def test_crossing_matrix_matches_reference(seed):
    d = random_general_position(7, seed)
    cm = crossing_matrix(d)
    arcs = oracles.arcs_of(d)
    for e, f in combinations(d.arc_pairs, 2):
        if set(e) & set(f):
            assert cm.count(e, f) == 0
        else:
            assert cm.count(e, f) == len(oracles.arc_crossings(arcs[e], arcs[f]))


def test_apex_of_convex_drawing_is_lowest():
    d = Drawing([(3, 5), (0, 2), (4, 0), (7, 3), (6, 7)])
    assert select_apex(d) == 2


def test_apex_never_the_center():
    d = Drawing([(0, 0), (4, 0), (4, 4), (0, 4), (1, 2)])
    # (4, 0) ties (0, 0) on y; the smaller x wins
    assert select_apex(d) == 0
    d2 = Drawing([(2, 1), (0, 0), (4, 0), (4, 4), (0, 4)])
    assert select_apex(d2) == 1


@pytest.mark.parametrize("seed", range(10))
def test_apex_is_a_hull_vertex(seed):
    d = random_general_position(12, seed)
    apex = d.points[select_apex(d)]
    assert (apex.x, apex.y) in oracles.hull([(p.x, p.y) for p in d.points])


def test_convex_labeling_is_angular():
    d = convex_position(7)
    lab = label_ccw(d, select_apex(d))
    assert lab.apex == 0
    assert lab.order == (1, 2, 3, 4, 5, 6)
    assert lab.dropped is None


def test_odd_ground_set_drops_last():
    d = convex_position(6)
    lab = label_ccw(d, select_apex(d))
    assert lab.order == (1, 2, 3, 4) and lab.dropped == 5 and lab.n == 4


@pytest.mark.parametrize("seed", range(8))
def test_all_triangles_counterclockwise(seed):
    d = random_general_position(9, seed)
    lab = label_ccw(d, select_apex(d))
    for (i, j), area in triangle_twice_areas(d, lab).items():
        assert area > 0
        tri = triangle_curve(d, lab, i, j)
        assert signed_area(tri.curve) > 0


def test_reversed_order_breaks_every_triangle():
    d = random_general_position(9, 3)
    lab = label_ccw(d, select_apex(d))
    rev = Labeling(lab.apex, tuple(reversed(lab.order)))
    assert all(area < 0 for area in triangle_twice_areas(d, rev).values())


def test_two_arcs_leaving_together():
    # arcs to 1 and 2 start along the same ray, so they overlap and the
    # drawing never reaches the rotation sort
    d = Drawing([(0, 0), (4, 4), (-4, 8), (8, 2)],
                arcs={(0, 2): [(0, 0), (2, 2), (-4, 8)]})
    assert V.TANGENCY_OR_OVERLAP in kinds(d)
    with pytest.raises(DrawingError):
        label_ccw(d, 0)
    assert issubclass(AmbiguousRotation, DrawingError)


def test_straight_triangle_is_euclidean():
    d = Drawing([(0, 0), (4, 1), (1, 4)])
    lab = label_ccw(d, select_apex(d))
    tri = triangle_curve(d, lab, 0, 1)
    assert set(tri.curve.points) == {Point(0, 0), Point(4, 1), Point(1, 4)}
    assert signed_area(tri.curve) == Fraction(15, 2)
