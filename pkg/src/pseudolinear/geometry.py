"""Exact rational predicates used by ingestion, nesting tests and rendering."""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence

Point = tuple[Fraction, Fraction]


def as_point(xy: Sequence) -> Point:
    return (Fraction(xy[0]), Fraction(xy[1]))


def cross(o: Point, a: Point, b: Point) -> Fraction:
    """Twice the signed area of triangle o, a, b (positive when ccw)."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def _half(v: Point) -> int:
    # 0 for directions in [0, pi), 1 for [pi, 2pi)
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def compare_directions(u: Point, v: Point) -> int:
    """Order nonzero direction vectors by polar angle in [0, 2pi)."""
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = u[0] * v[1] - u[1] * v[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


direction_key = cmp_to_key(compare_directions)


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """True if p lies on the closed segment ab."""
    if cross(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segment_intersection(a: Point, b: Point, c: Point, d: Point):
    """Intersect closed segments ab and cd exactly.

    Returns None, a single point, or the pair of endpoints of a collinear
    overlap of positive length (as a tuple tagged "overlap").
    """
    d1 = cross(c, d, a)
    d2 = cross(c, d, b)
    d3 = cross(a, b, c)
    d4 = cross(a, b, d)
    if d1 == 0 and d2 == 0:
        # collinear: project on the dominant axis
        axis = 0 if a[0] != b[0] else 1
        lo1, hi1 = sorted((a, b), key=lambda p: p[axis])
        lo2, hi2 = sorted((c, d), key=lambda p: p[axis])
        lo = lo1 if lo1[axis] >= lo2[axis] else lo2
        hi = hi1 if hi1[axis] <= hi2[axis] else hi2
        if lo[axis] > hi[axis]:
            return None
        if lo[axis] == hi[axis]:
            return lo
        return ("overlap", lo, hi)
    if sign(d1) * sign(d2) > 0 or sign(d3) * sign(d4) > 0:
        return None
    if d1 == 0:
        return a
    if d2 == 0:
        return b
    if d3 == 0:
        return c
    if d4 == 0:
        return d
    t = d1 / (d1 - d2)
    return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def winding_number(q: Point, polygon: Sequence[Point]) -> int:
    """Winding number of a closed polygon around q (q must not lie on it)."""
    w = 0
    n = len(polygon)
    for i in range(n):
        a, b = polygon[i], polygon[(i + 1) % n]
        if a[1] <= q[1]:
            if b[1] > q[1] and cross(a, b, q) > 0:
                w += 1
        elif b[1] <= q[1] and cross(a, b, q) < 0:
            w -= 1
    return w


def fmt_fraction(v: Fraction) -> int | str:
    """Canonical JSON form of a rational: an int, or the string "p/q"."""
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
