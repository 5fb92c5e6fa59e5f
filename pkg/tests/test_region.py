import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgs.region import (
    INF,
    BlockStructure,
    RegionError,
    StarRegion,
    Window,
    diagonal_half_space,
    first_difference,
    half_space,
    star,
)


def test_single_point_star():
    r = star([(0, 0)])
    assert r.sorted_corners() == [(0, 0)]
    assert (-3, -7) in r
    assert (1, 0) not in r


def test_ray_corner():
    # (-3, 0) + (-N) x N, closed downward
    r = star(corners=[(-3, INF)])
    assert (-3, 100) in r and (-3, -100) in r
    assert (-2, 0) not in r


def test_incomparable_corners_kept():
    r = star([(-3, -1), (-2, -2)])
    assert r.sorted_corners() == [(-3, -1), (-2, -2)]
    # (-3, -5) <= (-2, -2), so that pair collapses to one corner
    assert star([(-3, -5), (-2, -2)]).sorted_corners() == [(-2, -2)]


def test_union_drops_dominated_corner():
    assert (star([(-3, -5)]) | star([(-2, -4)])).sorted_corners() == [(-2, -4)]


def test_intersection_and_shift():
    a = StarRegion(2, [(-3, INF)])
    b = StarRegion(2, [(INF, -5)])
    assert (a & b).sorted_corners() == [(-3, -5)]
    assert star([(-3, -3)]).shift((1, 1)).sorted_corners() == [(-2, -2)]


def test_contains_examples():
    assert star([(0, 5), (5, 0)]).contains(star([(0, 0)]))
    rhs = StarRegion(2, [(0, INF), (5, 0)])
    lhs = StarRegion(2, [(INF, 0)])
    assert not rhs.contains(lhs)
    assert rhs.missing_corner(lhs)[1] == (6, 0)
    assert first_difference(rhs, rhs) is None


def test_membership_examples():
    cm = star([(-3, -5)])
    assert (-3, -5) in cm
    assert (-2, -5) not in cm
    assert (0, 0) not in StarRegion.empty(2)
    w = Window((-1, -1), (1, 1))
    assert star([(0, 0)]).window_points(w) == [(-1, -1), (-1, 0), (0, -1), (0, 0)]


def test_json_round_trip():
    r = StarRegion(2, [(-3, None), (None, -5)])
    assert r.to_json() == {"corners": [[-3, None], [None, -5]]}
    assert StarRegion.from_json(2, r.to_json()) == r


def test_window_parse():
    w = Window.parse("-3,-3..2,1")
    assert w.lo == (-3, -3) and w.hi == (2, 1)
    assert len(w) == 6 * 5
    assert str(w) == "-3,-3..2,1"
    with pytest.raises(RegionError):
        Window.parse("1,1..0,0")
    with pytest.raises(RegionError):
        Window.parse("garbage")


def test_block_structure():
    b = BlockStructure((3, 5))
    assert b.d == 8
    assert b.a() == (-3, -5)
    assert b.a([0]) == (-3, 0)
    assert b.delta.hi == (2, 4)
    with pytest.raises(RegionError):
        BlockStructure((0, 2))


def test_half_space_and_diagonal():
    h = half_space(2, 0, 4)
    assert (4, 1000) in h and (5, -1000) not in h
    with pytest.raises(RegionError):
        diagonal_half_space(2, 3)


def test_wrong_k_rejected():
    with pytest.raises(RegionError):
        star([(0, 0)]) | star([(0, 0, 0)])


# -- properties --------------------------------------------------------------------

coord = st.one_of(st.integers(-4, 4), st.just(INF))
corner2 = st.tuples(coord, coord)
region2 = st.lists(corner2, max_size=4).map(lambda cs: StarRegion(2, cs))
point2 = st.tuples(st.integers(-7, 7), st.integers(-7, 7))
points2 = st.lists(point2, max_size=5)
W = Window((-8, -8), (8, 8))


@settings(max_examples=150, deadline=None)
@given(points2, points2)
def test_star_commutes_with_union(e, f):
    k = 2
    assert StarRegion(k, e + f) == StarRegion(k, e) | StarRegion(k, f)


@settings(max_examples=150, deadline=None)
@given(region2, region2)
def test_union_and_intersection_are_pointwise(a, b):
    for mu in W.points():
        assert (mu in a | b) == (mu in a or mu in b)
        assert (mu in a & b) == (mu in a and mu in b)


@settings(max_examples=150, deadline=None)
@given(region2, region2, region2)
def test_contains_is_a_partial_order(a, b, c):
    assert a.contains(a)
    if a.contains(b) and b.contains(a):
        assert a == b
    if a.contains(b) and b.contains(c):
        assert a.contains(c)


@settings(max_examples=150, deadline=None)
@given(region2, region2)
def test_contains_agrees_with_points(a, b):
    # probing past every finite coordinate decides containment of rays
    big = Window((-8, -8), (12, 12))
    pointwise = all(mu in a for mu in big.points() if mu in b)
    assert a.contains(b) == pointwise


@settings(max_examples=100, deadline=None)
@given(region2, point2, st.tuples(st.integers(0, 5), st.integers(0, 5)))
def test_complement_is_stable(r, mu, nu):
    if mu not in r:
        assert (mu[0] + nu[0], mu[1] + nu[1]) not in r
    if mu in r:
        assert (mu[0] - nu[0], mu[1] - nu[1]) in r


@settings(max_examples=100, deadline=None)
@given(region2)
def test_star_is_idempotent(r):
    again = star(r.window_points(W), r.corners, k=2)
    assert again == r


@settings(max_examples=100, deadline=None)
@given(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), st.lists(corner2, min_size=1, max_size=4))
def test_finite_corner_containment_rule(g, hs):
    rhs = StarRegion(2, hs)
    by_rule = any(all(h is INF or x <= h for x, h in zip(g, hj)) for hj in hs)
    assert rhs.contains(StarRegion(2, [g])) == by_rule
