from __future__ import annotations

import pytest

from pseudolinear.errors import InvalidInput
from pseudolinear.stringset import (
    from_walks,
    remove_vertex,
    split_segment,
    subdivide_edge,
    validate_general_position,
)


def test_fix_x_rotation_alternates(sigma):
    ss = sigma("FIX_X")
    rot = ss.rotation_at("p2")
    assert [ss.segment_string(s) for s in rot] == ["s0", "s1", "s0", "s1"]
    rep = validate_general_position(ss)
    assert rep.ok and rep.crossings == 1


@pytest.mark.parametrize(
    "name, pairs, crossings",
    [
        ("FIX_X", 1, 1),
        ("FIX_PAR", 0, 0),
        ("FIX_B", 3, 1),
        ("FIX_W", 4, 2),
        ("FIX_TRI", 3, 3),
        ("FIX_DOT3", 3, 2),
        ("FIX_FOREST", 0, 0),
        ("FIX_K4X_OUT", 13, 1),
        ("FIX_K4_PLANAR", 12, 0),
    ],
)
def test_pair_counts(sigma, name, pairs, crossings):
    ss = sigma(name)
    assert ss.intersecting_pairs() == pairs
    assert ss.crossing_pairs() == crossings


def test_remove_outer_vertex_splits_strings(sigma):
    ss = remove_vertex(sigma("FIX_X"), "p0")
    assert {s.id: s.nodes for s in ss.strings.values()} == {"s0": ("p2", "p4"), "s1": ("p1", "p2", "p3")}
    # a string reduced to a point disappears
    ss = remove_vertex(sigma("FIX_B"), "p0")
    assert {s.id: s.nodes for s in ss.strings.values()} == {"s0": ("p2", "p3"), "s2": ("p4", "p2", "p1")}


def test_split_segment_keeps_first_id(sigma):
    ss = sigma("FIX_X")
    seg = ss.strings["s0"].segments[0]
    out, pid, first, second = split_segment(ss, seg)
    assert first == seg and second not in ss.seg_loc
    assert out.strings["s0"].nodes == ("p0", pid, "p2", "p4")
    assert out.points[pid].coords == (1, 1)
    assert out.plane_map().vertices == ss.plane_map().vertices


def test_subdivide_edge_pins_a_vertex(sigma):
    ss = sigma("FIX_X")
    e = next(iter(ss.plane_map().edges))
    out = subdivide_edge(ss, e, "mid")
    assert "mid" in out.plane_map().vertices
    with pytest.raises(InvalidInput):
        subdivide_edge(out, e, "mid")


def test_from_walks_with_coordinates():
    coords = {"a": (0, 0), "b": (2, 2), "c": (0, 2), "d": (2, 0), "x": (1, 1)}
    ss = from_walks([("s", ("a", "x", "b")), ("t", ("c", "x", "d"))], coords=coords)
    assert validate_general_position(ss).crossings == 1
    assert ss.plane_map().outer_vertices() == ["a", "b", "c", "d", "x"]


def test_tangency_is_reported():
    # t touches s at x without crossing
    coords = {"a": (0, 0), "b": (2, 0), "c": (0, 1), "d": (2, 1), "x": (1, 0)}
    ss = from_walks([("s", ("a", "x", "b")), ("t", ("c", "x", "d"))], coords=coords)
    rep = validate_general_position(ss)
    assert not rep.ok
    assert "touch" in str(rep.violations[0]) or "tangen" in str(rep.violations[0]).lower()
