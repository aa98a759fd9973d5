import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ucwiter.spaces import (Ball, Box, Euclidean, HalfSpace, HyperbolicPlane, LpSpace,
                            RayInterval, Segment, SpaceError, StarTree, WholeSpace,
                            check_axioms, convex_contains, make_set, make_space)

SPACES = [Euclidean(2), LpSpace(3, 3), HyperbolicPlane(), StarTree(5)]


def test_euclidean_distance_and_midpoint():
    E = Euclidean(2)
    assert E.dist(E.point([0, 0]), E.point([3, 4])) == 5.0
    np.testing.assert_array_equal(E.combine(E.point([0, 0]), E.point([2, 0]), 0.5), [1.0, 0.0])


def test_tree_distance_through_origin():
    T = StarTree(5)
    assert T.dist((1, 2.0), (3, 3.0)) == 5.0
    assert T.dist((1, 2.0), (1, 3.0)) == 1.0


def test_tree_combine_walks_through_origin():
    T = StarTree(5)
    assert T.combine((1, 2.0), (3, 3.0), 0.4) == (0, 0.0)
    assert T.combine((1, 2.0), (3, 3.0), 0.6) == (3, 1.0)


def test_tree_origin_representations_agree():
    T = StarTree(5)
    assert T.point((3, 0.0)) == T.point((1, 0)) == T.origin()


def test_hyperbolic_unit_distance():
    H = HyperbolicPlane()
    x = H.point([0.0, 0.0, 1.0])
    y = H.point([math.sinh(1), 0.0, math.cosh(1)])
    assert H.dist(x, y) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("space", SPACES, ids=repr)
def test_degenerate_combine_returns_x(space):
    rng = np.random.default_rng(0)
    x = space.random_point(rng)
    assert space.equal(space.combine(x, x, 0.7), x, 0.0)


def test_geodesic_sample_euclidean():
    E = Euclidean(2)
    pts = E.geodesic_sample(E.point([0, 0]), E.point([1, 0]), 3)
    np.testing.assert_allclose(pts, [[0, 0], [0.5, 0], [1, 0]])


@pytest.mark.parametrize("space", SPACES, ids=repr)
def test_geodesic_sample_constant(space):
    x = space.random_point(np.random.default_rng(1))
    assert all(space.dist(p, x) == 0.0 for p in space.geodesic_sample(x, x, 4))


def test_geodesic_sample_hyperbolic_gaps():
    H = HyperbolicPlane()
    x = H.origin()
    y = H.from_polar(2.0, 0.3)
    pts = H.geodesic_sample(x, y, 5)
    gaps = [H.dist(a, b) for a, b in zip(pts, pts[1:])]
    np.testing.assert_allclose(gaps, 0.5, atol=1e-12)


def test_geodesic_sample_rejects_k_below_two():
    E = Euclidean(2)
    with pytest.raises(SpaceError):
        E.geodesic_sample(E.origin(), E.origin(), 1)


@pytest.mark.parametrize("bad", [-0.1, 1.5])
def test_combine_rejects_lambda_outside_unit_interval(bad):
    E = Euclidean(2)
    with pytest.raises(SpaceError):
        E.combine(E.origin(), E.origin(), bad)


def test_invalid_points_rejected():
    with pytest.raises(SpaceError):
        Euclidean(2).point([1.0, 2.0, 3.0])
    with pytest.raises(SpaceError):
        StarTree(5).point((7, 1.0))
    with pytest.raises(SpaceError):
        StarTree(5).point((1, -1.0))
    with pytest.raises(SpaceError):
        LpSpace(2, 1.5)


@pytest.mark.parametrize("space", SPACES, ids=repr)
def test_axioms_small_sample(space):
    assert check_axioms(space, trials=1000, rng_seed=3) == dict.fromkeys(
        ("W1", "W2", "W3", "W4", "geodesic"), 0)


def test_unit_ball_membership():
    E = Euclidean(2)
    B = Ball(E, [0, 0], 1.0)
    assert convex_contains(B, E.point([0.5, 0]))
    assert convex_contains(B, E.point([1.0, 0]))
    assert not convex_contains(B, E.point([1 + 1e-6, 0]))


@pytest.mark.parametrize("space", SPACES, ids=repr)
def test_balls_are_convex(space):
    rng = np.random.default_rng(4)
    c = space.random_point(rng)
    B = Ball(space, c, 0.7)
    for _ in range(300):
        x, y = B.sample(rng), B.sample(rng)
        assert B.contains(space.combine(x, y, rng.uniform()))


@given(st.floats(0, 10), st.floats(0, 10), st.floats(0, 1))
@settings(max_examples=200, deadline=None)
def test_tree_single_ray_is_affine(a, b, lam):
    T = StarTree(4)
    z = T.combine(T.point((2, a)), T.point((2, b)), lam)
    assert z[1] == pytest.approx((1 - lam) * a + lam * b, abs=1e-12)
    assert z[1] == 0.0 or z[0] == 2


def test_hyperbolic_constraint_drift_after_a_million_combines():
    H = HyperbolicPlane()
    rng = np.random.default_rng(0)
    x, y = H.random_point(rng, 1.0), H.random_point(rng, 1.0)
    for _ in range(1_000_000):
        x = H.combine(x, y, 0.37)
        x, y = y, x
    assert max(H.constraint_drift(x), H.constraint_drift(y)) < 1e-6


@pytest.mark.parametrize("space", SPACES, ids=repr)
def test_extend_lands_on_sphere(space):
    rng = np.random.default_rng(5)
    for _ in range(200):
        a, x = space.random_point(rng), space.random_point(rng)
        if space.dist(a, x) == 0.0:
            continue
        t = rng.uniform(0.01, 3.0)
        assert space.dist(a, space.extend(a, x, t)) == pytest.approx(t, abs=1e-9)


def test_make_space_and_set_descriptors_round_trip():
    for desc in ({"kind": "euclidean", "dim": 3}, {"kind": "lp", "dim": 2, "p": 4.0},
                 {"kind": "hyperbolic2"}, {"kind": "rtree", "n_rays": 3}):
        assert make_space(desc).descriptor() == desc
    E = Euclidean(2)
    for desc in ({"kind": "ball", "center": [0.0, 1.0], "radius": 2.0},
                 {"kind": "halfspace", "normal": [1.0, 0.0], "offset": 0.5},
                 {"kind": "box", "lower": [0.0, 0.0], "upper": [1.0, 2.0]},
                 {"kind": "segment", "a": [0.0, 0.0], "b": [1.0, 1.0]}):
        assert make_set(E, desc).descriptor() == desc
    with pytest.raises(SpaceError):
        make_space({"kind": "sphere"})


def test_set_memberships():
    E = Euclidean(2)
    assert HalfSpace(E, [1, 0], 0.5).contains(E.point([0.5, 9]))
    assert not HalfSpace(E, [1, 0], 0.5).contains(E.point([0.6, 0]))
    assert Box(E, [0, 0], [1, 1]).contains(E.point([1, 0.5]))
    assert Segment(E, [0, 0], [2, 2]).contains(E.point([1, 1]))
    assert not Segment(E, [0, 0], [2, 2]).contains(E.point([1, 1.001]))
    T = StarTree(3)
    I = RayInterval(T, 1, 0.5, 2.0)
    assert I.contains((1, 1.0)) and not I.contains((2, 1.0))
    assert WholeSpace(T).contains((2, 5.0))


def test_closed_form_projections():
    E = Euclidean(2)
    np.testing.assert_allclose(Ball(E, [0, 0], 1).closed_form_projection(E.point([3, 4])),
                               [0.6, 0.8])
    np.testing.assert_allclose(HalfSpace(E, [1, 1], 0).closed_form_projection(E.point([1, 1])),
                               [0, 0], atol=1e-15)
    np.testing.assert_allclose(Box(E, [0, 0], [1, 1]).closed_form_projection(E.point([2, -1])),
                               [1, 0])
    T = StarTree(3)
    assert RayInterval(T, 1, 0.5, 2.0).closed_form_projection((2, 1.0)) == (1, 0.5)
    assert RayInterval(T, 1, 0.5, 2.0).closed_form_projection((1, 3.0)) == (1, 2.0)
