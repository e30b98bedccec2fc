from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polypart.geometry import (Orientation, Point, PointSet, convex_hull, facing_chain, format_coord,
                               hull_tangents, is_simple_polygon, orientation, parse_coord,
                               segments_intersect, strictly_between)
from strategies import lattice_points, naive_cross, rational_points

P = Point.of


class TestOrientation:
    def test_collinear(self):
        assert orientation(P(0, 0), P(1, 0), P(2, 0)) is Orientation.COLLINEAR

    def test_left_turn(self):
        assert orientation(P(0, 0), P(1, 0), P(1, 1)) is Orientation.CCW

    def test_right_turn(self):
        assert orientation(P(0, 0), P(1, 0), P(1, -1)) is Orientation.CW

    def test_exact_on_tiny_rationals(self):
        eps = Fraction(1, 10**30)
        assert orientation(P(0, 0), P(1, 1), P(2, 2 + eps)) is Orientation.CCW
        assert orientation(P(0, 0), P(1, 1), P(2, 2)) is Orientation.COLLINEAR


class TestStrictlyBetween:
    def test_midpoint(self):
        assert strictly_between(P(1, 0), P(0, 0), P(2, 0))

    def test_endpoint_excluded(self):
        assert not strictly_between(P(0, 0), P(0, 0), P(2, 0))

    def test_off_line(self):
        assert not strictly_between(P(1, 1), P(0, 0), P(2, 0))

    def test_degenerate_segment_rejected(self):
        with pytest.raises(ValueError):
            strictly_between(P(1, 1), P(0, 0), P(0, 0))

    def test_beyond_the_end(self):
        assert not strictly_between(P(3, 0), P(0, 0), P(2, 0))


class TestHull:
    def test_square_with_interior_point(self):
        ps = PointSet([(0, 0), (2, 0), (2, 2), (0, 2), (1, 1)])
        h = convex_hull(ps)
        assert set(h.vertex_indices) == {0, 1, 2, 3}
        assert set(h.boundary_indices) == {0, 1, 2, 3}

    def test_collinear_set(self):
        ps = PointSet([(0, 0), (1, 0), (2, 0)])
        h = convex_hull(ps)
        assert set(h.vertex_indices) == {0, 2}
        assert list(h.boundary_indices) in ([0, 1, 2], [2, 1, 0])

    def test_edge_interior_point_on_boundary_only(self):
        ps = PointSet([(0, 0), (2, 0), (1, 0), (0, 2)])
        h = convex_hull(ps)
        assert 2 not in h.vertex_indices
        bd = list(h.boundary_indices)
        k = bd.index(2)
        assert {bd[k - 1], bd[(k + 1) % len(bd)]} == {0, 1}

    def test_single_point(self):
        h = convex_hull(PointSet([(3, 4)]))
        assert h.vertex_indices == (0,)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            convex_hull(PointSet([]))


class TestTangents:
    def test_square_from_the_right(self):
        ps = PointSet([(0, 0), (2, 0), (2, 2), (0, 2)])
        assert set(hull_tangents(ps, convex_hull(ps), P(4, 1))) == {1, 2}

    def test_segment_hull(self):
        ps = PointSet([(0, 0), (2, 0)])
        assert set(hull_tangents(ps, convex_hull(ps), P(1, 2))) == {0, 1}

    def test_triangle_from_below(self):
        ps = PointSet([(0, 0), (4, 0), (2, 3)])
        assert set(hull_tangents(ps, convex_hull(ps), P(2, -2))) == {0, 1}

    def test_inside_rejected(self):
        ps = PointSet([(0, 0), (4, 0), (2, 3)])
        with pytest.raises(ValueError):
            hull_tangents(ps, convex_hull(ps), P(2, 1))

    def test_on_boundary_rejected(self):
        ps = PointSet([(0, 0), (4, 0), (2, 3)])
        with pytest.raises(ValueError):
            hull_tangents(ps, convex_hull(ps), P(2, 0))

    def test_collinear_tie_takes_farther_endpoint(self):
        # external point on the extension of the bottom edge
        ps = PointSet([(0, 0), (2, 0), (1, 2)])
        left, right = hull_tangents(ps, convex_hull(ps), P(4, 0))
        assert 0 in (left, right)


class TestFacingChain:
    def test_square_from_below(self):
        ps = PointSet([(0, 0), (2, 0), (2, 2), (0, 2)])
        assert facing_chain(ps, convex_hull(ps), P(1, -2)) == [0, 1]

    def test_segment_hull_is_one_chain(self):
        ps = PointSet([(0, 0), (1, 0), (2, 0)])
        assert sorted(facing_chain(ps, convex_hull(ps), P(1, 3))) == [0, 1, 2]

    def test_keeps_edge_interior_point(self):
        ps = PointSet([(0, 0), (4, 0), (2, 3), (2, 0)])
        assert facing_chain(ps, convex_hull(ps), P(2, -2)) == [0, 3, 1]


class TestPointFile:
    def test_parse_mixed_coordinates(self):
        ps = PointSet.parse("# header\n0 0\n\n1/2 -3/4\n  7 2 \n")
        assert ps[1] == P(Fraction(1, 2), Fraction(-3, 4))
        assert len(ps) == 3

    def test_round_trip(self):
        ps = PointSet([(Fraction(1, 3), 2), (5, Fraction(-7, 2))])
        assert PointSet.parse(ps.dumps()) == ps

    def test_bad_line_reports_line_number(self):
        with pytest.raises(ValueError, match="line 2"):
            PointSet.parse("0 0\n1 x\n")

    def test_duplicate_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            PointSet([(0, 0), (0, 0)])

    def test_coordinate_tokens(self):
        assert parse_coord("-6/4") == Fraction(-3, 2)
        assert format_coord(Fraction(-3, 2)) == "-3/2"
        assert format_coord(Fraction(4)) == "4"
        with pytest.raises(ValueError):
            parse_coord("1/0")


def test_bowtie_is_not_simple():
    assert not is_simple_polygon([(0, 0), (2, 2), (2, 0), (0, 2)])
    assert is_simple_polygon([(0, 0), (2, 0), (2, 2), (0, 2)])


def test_touching_segments_intersect():
    assert segments_intersect((0, 0), (2, 0), (2, 0), (3, 5))
    assert not segments_intersect((0, 0), (1, 0), (2, 0), (3, 0))


# ---------------------------------------------------------------- properties

@given(rational_points(3, 3))
def test_orientation_antisymmetric(ps):
    a, b, c = ps
    assert orientation(a, b, c) == -orientation(a, c, b)


@given(rational_points(3, 3))
def test_between_implies_collinear(ps):
    p, a, b = ps
    if strictly_between(p, a, b):
        assert orientation(a, b, p) is Orientation.COLLINEAR


@given(rational_points(1, 9))
def test_hull_contains_everything(ps):
    h = convex_hull(ps)
    vs = list(h.vertex_indices)
    if len(vs) < 3:
        return
    for u, v in zip(vs, vs[1:] + vs[:1]):
        for q in ps:
            assert naive_cross(ps[u], ps[v], q) >= 0
    for u, v, w in zip(vs, vs[1:] + vs[:1], vs[2:] + vs[:2]):
        assert naive_cross(ps[u], ps[v], ps[w]) > 0


@given(lattice_points(2, 10))
def test_boundary_points_lie_between_neighbouring_vertices(ps):
    h = convex_hull(ps)
    vs = list(h.vertex_indices)
    bd = list(h.boundary_indices)
    assert [i for i in bd if i in vs] == vs or len(vs) < 3
    if len(vs) < 2:
        return
    for i in bd:
        if i in vs:
            continue
        k = bd.index(i)
        before = next(bd[(k - t) % len(bd)] for t in range(1, len(bd)) if bd[(k - t) % len(bd)] in vs)
        after = next(bd[(k + t) % len(bd)] for t in range(1, len(bd)) if bd[(k + t) % len(bd)] in vs)
        assert strictly_between(ps[i], ps[before], ps[after])


@given(lattice_points(1, 8), st.tuples(st.integers(-6, 14), st.integers(-6, 14)))
def test_facing_chain_ends_are_tangents(ps, e):
    h = convex_hull(ps)
    e = P(*e)
    if len(h.vertex_indices) >= 3:
        vs = list(h.vertex_indices)
        if all(naive_cross(ps[u], ps[v], e) >= 0 for u, v in zip(vs, vs[1:] + vs[:1])):
            return
    elif any(q == e for q in ps) or (len(ps) > 1 and any(
            naive_cross(ps[h.vertex_indices[0]], ps[h.vertex_indices[-1]], e) == 0 for _ in [0])):
        return
    left, right = hull_tangents(ps, h, e)
    chain = facing_chain(ps, h, e)
    assert {chain[0], chain[-1]} == {left, right} or left == right == chain[0]
    for q in ps:
        # every point lies in the closed wedge spanned by the two tangents
        s1 = naive_cross(e, ps[left], q)
        s2 = naive_cross(e, ps[right], q)
        assert s1 * s2 <= 0 or s1 == 0 or s2 == 0
