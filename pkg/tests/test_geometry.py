from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import assume, given, settings, strategies as st

from pwlgen.errors import (
    DegeneratePoint,
    DimensionMismatch,
    EmptyDomain,
    EmptyPolytope,
    UnboundedPolytope,
)
from pwlgen.geometry import (
    HPolytope,
    Polygon2D,
    as_fraction,
    enumerate_vertices,
    hull_description,
    lower_envelope,
    point_in_hull,
    polygon_area,
    project_to_plane,
    strengthened_proportion,
    vertices_by_bases,
)


def simplex(n):
    eq = [(tuple([1] * n), 1)]
    ineq = [(tuple(-int(i == j) for j in range(n)), 0) for i in range(n)]
    return HPolytope(n, eq, ineq)


def box(n):
    ineq = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        ineq.append((tuple(e), 1))
        e[i] = -1
        ineq.append((tuple(e), 0))
    return HPolytope(n, [], ineq)


def units(n):
    return {tuple(F(int(i == j)) for j in range(n)) for i in range(n)}


@pytest.mark.parametrize("n", range(1, 13))
def test_simplex_vertices_are_unit_vectors(n):
    assert enumerate_vertices(simplex(n)) == units(n)


def test_unit_square_corners():
    assert enumerate_vertices(box(2)) == {(F(a), F(b)) for a, b in product((0, 1), repeat=2)}


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        as_fraction(0.5)


def test_empty_and_unbounded():
    with pytest.raises(EmptyPolytope):
        enumerate_vertices(HPolytope(1, [], [((1,), -1), ((-1,), 0)]))
    with pytest.raises(UnboundedPolytope):
        enumerate_vertices(HPolytope(2, [], [((-1, 0), 0), ((0, -1), 0)]))
    # a line is unbounded too
    with pytest.raises(UnboundedPolytope):
        enumerate_vertices(HPolytope(2, [((1, -1), 0)], []))


def test_contradictory_equalities_are_empty():
    with pytest.raises(EmptyPolytope):
        enumerate_vertices(HPolytope(2, [((1, 1), 1), ((1, 1), 2)], [((-1, 0), 0)]))


def test_point_polytope():
    P = HPolytope(2, [((1, 0), F(1, 2)), ((0, 1), 3)], [])
    assert enumerate_vertices(P) == {(F(1, 2), F(3))}


def test_point_in_hull_examples():
    tri = [(0, 0), (1, 0), (0, 1)]
    assert point_in_hull(tri, (F(1, 3), F(1, 3)))
    assert not point_in_hull(tri, (1, 1))
    assert point_in_hull([(0, 0), (1, 0), (1, 1), (2, 1)], (1, 1))
    with pytest.raises(DimensionMismatch):
        point_in_hull(tri, (1, 1, 1))


small_points = st.lists(
    st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=7
)


@settings(max_examples=40, deadline=None)
@given(small_points)
def test_hull_description_round_trip(points):
    """Vertices of the facet description are exactly the extreme input points."""
    eqs, facets = hull_description(points)
    P = HPolytope(3, [(n, b) for n, b in eqs], [(n, b) for n, b in facets])
    verts = enumerate_vertices(P)
    uniq = sorted(set(points))
    if len(uniq) == 1:
        extreme = {tuple(F(x) for x in uniq[0])}
    else:
        extreme = {
            tuple(F(x) for x in p) for i, p in enumerate(uniq) if not point_in_hull(uniq[:i] + uniq[i + 1:], p)
        }
    assert verts == extreme


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-4, 4)), min_size=3, max_size=6))
def test_vertex_enumeration_matches_bases(rows):
    """Random bounded slices of a box against brute-force basis enumeration."""
    ineq = list(box(3).inequalities) + [((a, b, 0), F(c, 2)) for a, b, c in rows]
    P = HPolytope(3, [], ineq)
    try:
        verts = enumerate_vertices(P)
    except EmptyPolytope:
        assert vertices_by_bases(P) == set()
        return
    assert verts == vertices_by_bases(P)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=3, max_size=8))
def test_vertices_are_tight_and_extreme(points):
    eqs, facets = hull_description(points)
    P = HPolytope(2, eqs, facets)
    verts = sorted(enumerate_vertices(P))
    for v in verts:
        others = [w for w in verts if w != v]
        if others:
            assert not point_in_hull(others, v)


def test_projection_of_a_square_is_itself():
    poly = project_to_plane(box(2), [(1, 0), (0, 1)])
    assert poly.vertices == ((0, 0), (1, 0), (1, 1), (0, 1))
    assert polygon_area(poly) == 1


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=8))
def test_projection_is_hull_of_projected_vertices(points):
    # lift the points to 3-D and project back
    lifted = [(x, y, x + 2 * y) for x, y in points]
    eqs, facets = hull_description(lifted)
    P = HPolytope(3, eqs, facets)
    assert project_to_plane(P, [(1, 0, 0), (0, 1, 0)]) == Polygon2D.hull(points)


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=3, max_size=9),
    st.integers(-7, 7),
    st.integers(-7, 7),
)
def test_area_is_translation_invariant(points, dx, dy):
    a = polygon_area(Polygon2D.hull(points))
    b = polygon_area(Polygon2D.hull([(x + dx, y + dy) for x, y in points]))
    assert a == b


def _clip(vertices, normal, rhs):
    """Sutherland-Hodgman against normal . p <= rhs, exact."""
    out = []
    n = len(vertices)
    for k in range(n):
        p, q = vertices[k], vertices[(k + 1) % n]
        sp = normal[0] * p[0] + normal[1] * p[1] - rhs
        sq = normal[0] * q[0] + normal[1] * q[1] - rhs
        if sp <= 0:
            out.append(p)
        if (sp < 0 < sq) or (sq < 0 < sp):
            t = sp / (sp - sq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=3, max_size=9),
    st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
    st.integers(-4, 4),
)
def test_area_is_additive_across_a_chord(points, normal, rhs):
    assume(normal != (0, 0))
    poly = Polygon2D.hull(points)
    assume(not poly.degenerate)
    vs = [tuple(F(c) for c in v) for v in poly.vertices]
    left = _clip(vs, normal, F(rhs))
    right = _clip(vs, (-normal[0], -normal[1]), F(-rhs))
    area = lambda pts: polygon_area(Polygon2D.hull(pts)) if pts else 0
    assert area(left) + area(right) == polygon_area(poly)


def test_polygon_canonical_form():
    poly = Polygon2D.hull([(1, 1), (0, 0), (1, 0), (0, 1), (F(1, 2), 0)])
    assert poly.vertices == ((0, 0), (1, 0), (1, 1), (0, 1))
    assert Polygon2D.hull([(2, 2), (0, 0), (1, 1)]).degenerate
    assert polygon_area(Polygon2D.hull([(0, 0), (3, 3)])) == 0


def test_lower_envelopes():
    square = Polygon2D.hull([(0, 0), (1, 0), (1, 1), (0, 1)])
    env = lower_envelope(square)
    assert env.breakpoints == (0, 1) and env.pieces == ((0, 0),)
    graph = Polygon2D.hull([(0, 0), (1, 4), (2, 7), (3, 9), (4, 10)])
    env = lower_envelope(graph)
    assert env.breakpoints == (0, 4) and env.pieces == ((F(5, 2), 0),)
    env = lower_envelope(Polygon2D.hull([(0, 0), (2, 0), (1, 1)]))
    assert env.pieces == ((0, 0),) and env.breakpoints == (0, 2)
    with pytest.raises(DegeneratePoint):
        lower_envelope(Polygon2D.hull([(1, 1)]))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=2, max_size=8))
def test_proportion_of_a_polygon_against_itself_is_zero(points):
    poly = Polygon2D.hull(points)
    lo, hi = poly.x_range
    assume(lo < hi)
    assert strengthened_proportion(poly, poly, (lo, hi)) == 0


def test_proportion_edge_cases():
    square = Polygon2D.hull([(0, 0), (2, 0), (2, 1), (0, 1)])
    raised = Polygon2D.hull([(1, 1), (2, 1), (2, 2), (1, 2)])
    assert strengthened_proportion(square, raised, (0, 2)) == 1
    assert strengthened_proportion(square, None, (0, 2)) == 1
    with pytest.raises(EmptyDomain):
        strengthened_proportion(square, square, (1, 1))
    # a crossing envelope counts only the part strictly above
    tilted = Polygon2D.hull([(0, -1), (2, 1), (2, 3), (0, 3)])
    assert strengthened_proportion(square, tilted, (0, 2)) == F(1, 2)
