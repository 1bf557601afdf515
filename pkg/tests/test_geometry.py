from __future__ import annotations

from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from pseudolinear.geometry import (
    as_point,
    compare_directions,
    cross,
    fmt_fraction,
    on_segment,
    segment_intersection,
    winding_number,
)

coord = st.integers(-30, 30)
point = st.tuples(coord, coord).map(as_point)


def P(x, y):
    return as_point((x, y))


def test_crossing_point_is_exact():
    hit = segment_intersection(P(0, 0), P(3, 1), P(0, 1), P(3, 0))
    assert hit == (Fraction(3, 2), Fraction(1, 2))
    assert all(isinstance(c, Fraction) for c in hit)


def test_disjoint_and_touching():
    assert segment_intersection(P(0, 0), P(1, 0), P(0, 1), P(1, 1)) is None
    assert segment_intersection(P(0, 0), P(2, 0), P(1, 0), P(1, 3)) == P(1, 0)


def test_collinear_cases():
    assert segment_intersection(P(0, 0), P(2, 0), P(3, 0), P(5, 0)) is None
    assert segment_intersection(P(0, 0), P(2, 0), P(2, 0), P(5, 0)) == P(2, 0)
    assert segment_intersection(P(0, 0), P(3, 0), P(1, 0), P(5, 0)) == ("overlap", P(1, 0), P(3, 0))


def test_direction_order():
    dirs = [P(1, 0), P(1, 1), P(0, 1), P(-1, 0), P(0, -1), P(1, -1)]
    for a, b in zip(dirs, dirs[1:]):
        assert compare_directions(a, b) == -1
        assert compare_directions(b, a) == 1
    assert compare_directions(P(2, 2), P(1, 1)) == 0


def test_winding_number_square():
    sq = [P(0, 0), P(4, 0), P(4, 4), P(0, 4)]
    assert winding_number(P(2, 2), sq) == 1
    assert winding_number(P(2, 2), sq[::-1]) == -1
    assert winding_number(P(5, 2), sq) == 0


def test_fmt_fraction():
    assert fmt_fraction(Fraction(4, 2)) == 2
    assert fmt_fraction(Fraction(-3, 4)) == "-3/4"


@given(point, point, point, point)
def test_intersection_is_symmetric_and_on_both(a, b, c, d):
    if a == b or c == d:
        return
    h1 = segment_intersection(a, b, c, d)
    h2 = segment_intersection(c, d, a, b)
    assert (h1 is None) == (h2 is None)
    if h1 is not None and not isinstance(h1[0], str):
        assert on_segment(h1, a, b) and on_segment(h1, c, d)
        assert h1 == h2


@given(point, point, point)
def test_cross_antisymmetric(o, a, b):
    assert cross(o, a, b) == -cross(o, b, a)
