from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from errors import ContainmentError, DimensionError, InputError, UnboundedPolytopeError
from polyhedra import (Polytope, contains, dim, faces, ineqs_to_rays, minimal_face, minkowski_sum,
                       rays_to_ineqs, scale, volume)


def square(side=1):
    return Polytope.from_vertices([(0, 0), (side, 0), (0, side), (side, side)], 2)


def segment(a, b):
    return Polytope.from_vertices([(a,), (b,)], 1)


QUADRANT = rays_to_ineqs([(1, 0), (0, 1)], 2)


def test_rays_to_ineqs_interval_cone():
    cone = rays_to_ineqs([(0, 1), (1, 1)], 2)
    assert cone.ineqs == ((-1, 1), (1, 0))
    assert cone.is_pointed


def test_rays_to_ineqs_orthant():
    assert QUADRANT.ineqs == ((0, 1), (1, 0))
    assert QUADRANT.rays == ((0, 1), (1, 0))


def test_rays_to_ineqs_detects_lineality():
    halfplane = rays_to_ineqs([(1, 0), (-1, 0), (0, 1)], 2)
    assert halfplane.lineality == ((1, 0),)
    assert halfplane.rays == ((0, 1),)
    assert halfplane.ineqs == ((0, 1),)


def test_rays_to_ineqs_rejects_zero_ray():
    with pytest.raises(InputError):
        rays_to_ineqs([(0, 0), (1, 0)], 2)


def test_ineqs_to_rays():
    assert ineqs_to_rays([(1, 0), (-1, 1)], 2).rays == ((0, 1), (1, 1))
    assert ineqs_to_rays([(1, 0), (0, 1)], 2) == QUADRANT


def test_ineqs_to_rays_without_inequalities_is_the_whole_line():
    line = ineqs_to_rays([], 1)
    assert line.lineality == ((1,),)
    assert line.rays == ()


def test_lower_dimensional_cone_has_equations():
    ray = rays_to_ineqs([(1, 1)], 2)
    assert ray.dim == 1
    assert ray.equations == ((1, -1),)
    assert ray.contains((3, 3))
    assert not ray.contains((3, 2))


small = st.integers(min_value=-3, max_value=3)


@st.composite
def ray_sets(draw, max_dim=4):
    d = draw(st.integers(min_value=1, max_value=max_dim))
    vec = st.lists(small, min_size=d, max_size=d).filter(any)
    return d, draw(st.lists(vec, min_size=1, max_size=6))


@settings(max_examples=60, deadline=None)
@given(data=ray_sets())
def test_double_description_round_trip(data):
    d, rays = data
    cone = rays_to_ineqs(rays, d)
    assert ineqs_to_rays(cone.ineqs, d, equations=cone.equations) == cone
    for r in rays:
        assert cone.contains(r)


@settings(max_examples=60, deadline=None)
@given(data=ray_sets(max_dim=3))
def test_faces_of_faces_are_faces(data):
    d, rays = data
    cone = rays_to_ineqs(rays, d)
    all_faces = {f.geometry for f in faces(cone)}
    for face in all_faces:
        assert {g.geometry for g in faces(face)} <= all_faces


def test_intersect():
    halfplane = ineqs_to_rays([(1, -1)], 2)
    assert QUADRANT.intersect(halfplane) == rays_to_ineqs([(1, 0), (1, 1)], 2)


def test_restricted_minimal_face():
    # minimal face of the quadrant cut by the diagonal hyperplane
    diagonal = ineqs_to_rays([], 2, equations=[(1, -1)])
    restricted = QUADRANT.intersect(diagonal)
    assert minimal_face(restricted, (2, 2)).geometry == restricted
    assert minimal_face(restricted, (0, 0)).geometry.is_zero


def test_line_interval():
    assert QUADRANT.line_interval((-1, 1), (1, 0)) == (1, None)
    assert QUADRANT.line_interval((1, 1), (-1, 0)) == (0, 1)
    assert QUADRANT.line_interval((1, -1), (1, 0)) is None


def test_dim():
    assert dim(segment(0, 2)) == 1
    assert dim(Polytope.point((0, 0))) == 0
    assert dim(rays_to_ineqs([(0, 1), (1, 1)], 2)) == 2


def test_face_counts():
    assert len(faces(square())) == 9
    assert len(faces(QUADRANT)) == 4
    assert len(faces(segment(0, 1))) == 3


def test_minimal_face():
    assert minimal_face(QUADRANT, (1, 0)).geometry == rays_to_ineqs([(1, 0)], 2)
    assert minimal_face(QUADRANT, (1, 1)).geometry == QUADRANT
    assert minimal_face(QUADRANT, (0, 0)).geometry == rays_to_ineqs([], 2)


def test_minimal_face_outside():
    with pytest.raises(ContainmentError):
        minimal_face(QUADRANT, (-1, 0))


def test_minkowski_sum():
    assert minkowski_sum(segment(0, 1), segment(0, 2)) == segment(0, 3)
    assert minkowski_sum(square(), Polytope.point((5, 5))) == square().translate((5, 5))
    triangle = Polytope.standard_simplex(1, 2)
    edge = Polytope.from_vertices([(0, 0), (1, 0)], 2)
    expected = Polytope.from_vertices([(0, 0), (2, 0), (1, 1), (0, 1)], 2)
    assert minkowski_sum(triangle, edge) == expected


def test_minkowski_sum_dimension_mismatch():
    with pytest.raises(DimensionError):
        minkowski_sum(segment(0, 1), square())


def test_scale():
    assert scale(segment(0, 2), Fraction(1, 2)) == segment(0, 1)
    assert scale(square(), 1) == square()
    assert scale(square(), 3) == square(3)
    assert scale(square(), 0) == Polytope.point((0, 0))
    with pytest.raises(InputError):
        scale(square(), -1)


def test_volume():
    assert volume(Polytope.standard_simplex(1, 2)) == Fraction(1, 2)
    assert volume(square()) == 1
    assert volume(Polytope.from_vertices([(0, 0), (1, 0)], 2)) == 0
    assert volume(Polytope.standard_simplex(3, 2)) == Fraction(9, 2)
    assert volume(Polytope.standard_simplex(1, 3)) == Fraction(1, 6)


def test_contains():
    assert contains(square(), (Fraction(1, 2), Fraction(1, 2)))
    assert not contains(QUADRANT, (-1, 0))
    assert contains(QUADRANT, (0, 0))


def test_from_ineqs_matches_from_vertices():
    box = Polytope.from_ineqs([((1, 0), 0), ((0, 1), 0), ((-1, 0), -1), ((0, -1), -1)], 2)
    assert box == square()


def test_from_ineqs_unbounded():
    with pytest.raises(UnboundedPolytopeError):
        Polytope.from_ineqs([((1,), 0)], 1)


def test_contains_polytope():
    assert square(2).contains_polytope(square())
    assert not square().contains_polytope(square(2))


def _monte_carlo_volume(polytope, rng, count):
    lo = np.array([float(min(v[i] for v in polytope.vertices)) for i in range(polytope.ambient_dim)])
    hi = np.array([float(max(v[i] for v in polytope.vertices)) for i in range(polytope.ambient_dim)])
    points = rng.uniform(lo, hi, size=(count, polytope.ambient_dim))
    a = np.array([[float(x) for x in c] for c, _ in polytope.ineqs])
    b = np.array([float(rhs) for _, rhs in polytope.ineqs])
    inside = np.all(points @ a.T >= b, axis=1)
    return inside.mean() * np.prod(hi - lo)


def test_volume_against_monte_carlo():
    rng = np.random.default_rng(42)
    hexagon = Polytope.from_vertices([(0, 0), (2, 0), (3, 1), (2, 2), (0, 2), (-1, 1)], 2)
    estimate = _monte_carlo_volume(hexagon, rng, 20000)
    assert volume(hexagon) == 6
    assert abs(estimate - 6) / 6 < 0.05


@pytest.mark.slow
def test_volume_against_monte_carlo_random_polytopes():
    rng = np.random.default_rng(7)
    for k in range(20):
        d = 2 + k % 3
        points = [tuple(Fraction(int(x), 8) for x in rng.integers(0, 9, size=d)) for _ in range(12)]
        polytope = Polytope.from_vertices(points, d)
        exact = volume(polytope)
        if exact == 0:
            continue
        estimate = _monte_carlo_volume(polytope, rng, 100000)
        assert abs(estimate - float(exact)) / float(exact) < 0.05


@pytest.mark.slow
def test_double_description_round_trip_seeded():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        d = int(rng.integers(1, 6))
        rays = [tuple(int(x) for x in rng.integers(-3, 4, size=d)) for _ in range(int(rng.integers(1, 7)))]
        rays = [r for r in rays if any(r)]
        if not rays:
            continue
        cone = rays_to_ineqs(rays, d)
        assert ineqs_to_rays(cone.ineqs, d, equations=cone.equations) == cone


point_2d = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
polygons = st.lists(point_2d, min_size=1, max_size=5).map(lambda pts: Polytope.from_vertices(pts, 2))
weights = st.fractions(min_value=0, max_value=4, max_denominator=6)


@settings(max_examples=30, deadline=None)
@given(p=polygons, q=polygons, r=polygons)
def test_minkowski_sum_commutative_and_associative(p, q, r):
    assert minkowski_sum(p, q) == minkowski_sum(q, p)
    assert minkowski_sum(minkowski_sum(p, q), r) == minkowski_sum(p, minkowski_sum(q, r))


@settings(max_examples=30, deadline=None)
@given(p=polygons, a=weights, b=weights)
def test_scales_add_up(p, a, b):
    assert minkowski_sum(scale(p, a), scale(p, b)) == scale(p, a + b)


@settings(max_examples=30, deadline=None)
@given(p=polygons, alpha=weights)
def test_volume_is_homogeneous(p, alpha):
    assert volume(scale(p, alpha)) == alpha ** 2 * volume(p)


@settings(max_examples=40, deadline=None)
@given(data=ray_sets(max_dim=3), picks=st.lists(st.integers(min_value=0, max_value=2), min_size=6, max_size=6))
def test_minimal_face_is_meet_of_containing_faces(data, picks):
    d, rays = data
    cone = rays_to_ineqs(rays, d)
    x = tuple(sum(k * r[i] for k, r in zip(picks, rays)) for i in range(d))
    containing = [f.geometry for f in faces(cone) if f.geometry.contains(x)]
    expected = containing[0]
    for face in containing[1:]:
        expected = expected.intersect(face)
    assert minimal_face(cone, x).geometry == expected
