from __future__ import annotations

import pytest

from pseudolinear.errors import DanglingDart, NonPlanarEmbedding, VertexNotOnCycle
from pseudolinear.planegraph import (
    Dart,
    Edge,
    biconnected_blocks,
    build_map,
    cycle_from_edges,
    cycle_interior,
    rotation_inside,
    rotation_outside,
)


def triangle():
    # a ccw triangle 0 -> 1 -> 2
    edges = [Edge(0, "a", ("u", "v")), Edge(1, "b", ("v", "w")), Edge(2, "c", ("w", "u"))]
    rotation = {
        "u": [Dart(0, 0), Dart(2, 1)],
        "v": [Dart(1, 0), Dart(0, 1)],
        "w": [Dart(2, 0), Dart(1, 1)],
    }
    return build_map(None, edges, rotation, Dart(0, 1))


def test_triangle_faces():
    m = triangle()
    assert len(m.faces) == 2
    assert m.outer_vertices() == ["u", "v", "w"]
    assert m.is_outer_face(m.face_of[Dart(0, 1)])
    assert not m.is_outer_face(m.face_of[Dart(0, 0)])


def test_dangling_rotation():
    edges = [Edge(0, "a", ("u", "v"))]
    with pytest.raises(DanglingDart):
        build_map(None, edges, {"u": [Dart(0, 0)], "v": []}, Dart(0, 0))


def test_non_planar_rotation():
    # K4 with a rotation system of genus 1
    pairs = [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]
    edges = [Edge(i, f"s{i}", p) for i, p in enumerate(pairs)]
    rot = {v: [] for v in "abcd"}
    for i, (x, y) in enumerate(pairs):
        rot[x].append(Dart(i, 0))
        rot[y].append(Dart(i, 1))
    with pytest.raises(NonPlanarEmbedding):
        build_map(None, edges, rot, Dart(0, 0))


def test_cycle_sides_fix_b(sigma):
    ss = sigma("FIX_B")
    m = ss.plane_map()
    dec = biconnected_blocks(m)
    assert dec.cut_vertices == frozenset({"p2"})
    cyc = [b for b in dec.blocks if not b.is_bridge]
    assert [sorted(b.vertices) for b in cyc] == [["p0", "p2", "p4"]]
    c = cycle_interior(m, cycle_from_edges(m, sorted(cyc[0].edges)))
    assert set(c.vertices) == {"p0", "p2", "p4"}
    for v in c.vertices:
        ins, outs = rotation_inside(m, c, v), rotation_outside(m, c, v)
        # the two cycle darts are in both lists; every other dart in exactly one
        assert len(ins) + len(outs) == len(m.rotation[v]) + 2
        assert set(ins) | set(outs) == set(m.rotation[v])
    with pytest.raises(VertexNotOnCycle):
        rotation_inside(m, c, "p1")


def test_fix_x_blocks(sigma):
    m = sigma("FIX_X").plane_map()
    dec = biconnected_blocks(m)
    assert len(dec.blocks) == 4 and all(b.is_bridge for b in dec.blocks)
    assert dec.cut_vertices == frozenset({"p2"})
    assert (len(m.vertices), len(m.edges), len(m.faces)) == (5, 4, 1)
