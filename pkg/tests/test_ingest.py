from __future__ import annotations

import json

import pytest

from pseudolinear.errors import OverlapViolation, SchemaError, SelfCrossViolation, TangencyViolation
from pseudolinear.ingest import (
    Polyline,
    parse_drawing,
    polylines_to_stringset,
    serialize_drawing,
    stringset_to_doc,
)


def pl(i, *pts):
    return Polyline(i, tuple(pts))


def test_fix_x_one_crossing(sigma):
    ss = sigma("FIX_X")
    assert ss.points["p2"].coords == (2, 2)
    assert len(ss.plane_map().vertices) == 5


def test_rational_crossing():
    ss = polylines_to_stringset([pl("a", (0, 0), (3, 1)), pl("b", (0, 1), (3, 0))])
    (x,) = [p for p in ss.incident if ss.degree(p) == 4]
    assert ss.points[x].coords == (3 / 2, 1 / 2)


def test_overlap_rejected():
    with pytest.raises(OverlapViolation):
        polylines_to_stringset([pl("a", (0, 0), (4, 0)), pl("b", (2, 0), (6, 0))])


def test_tangency_rejected():
    with pytest.raises(TangencyViolation):
        polylines_to_stringset([pl("a", (0, 0), (4, 0)), pl("b", (0, 2), (2, 0), (4, 2))])


def test_self_cross_rejected():
    with pytest.raises(SelfCrossViolation):
        polylines_to_stringset([pl("a", (0, 0), (4, 4), (4, 0), (0, 4))])


def test_end_on_interior_is_allowed():
    ss = polylines_to_stringset([pl("a", (0, 0), (4, 0)), pl("b", (2, 0), (2, 3))])
    assert ss.intersecting_pairs() == 1 and ss.crossing_pairs() == 0


def test_geometric_round_trip(fixtures_all):
    for name, doc in fixtures_all.items():
        data = serialize_drawing(doc)
        again = parse_drawing(data)
        assert serialize_drawing(again) == data, name


def test_combinatorial_round_trip(fixtures_all):
    for name, doc in fixtures_all.items():
        ss = doc.to_stringset()
        for with_coords in (True, False):
            cdoc = stringset_to_doc(ss, with_coords=with_coords)
            data = serialize_drawing(cdoc)
            back = parse_drawing(data).to_stringset()
            m1, m2 = ss.plane_map(), back.plane_map()
            assert len(m1.faces) == len(m2.faces), name
            assert {v: len(m1.rotation[v]) for v in m1.vertices} == {v: len(m2.rotation[v]) for v in m2.vertices}
            assert sorted(m1.outer_vertices()) == sorted(m2.outer_vertices()), name


def _doc(**kw):
    base = {"format": "pseudolinear-drawing", "version": 1, "mode": "geometric", "polylines": []}
    base.update(kw)
    return json.dumps(base)


@pytest.mark.parametrize(
    "data, pointer",
    [
        ("not json", ""),
        (_doc(version=2), "/version"),
        (_doc(mode="sketch"), "/mode"),
        (_doc(polylines=[{"id": "a", "points": [[0, 0]]}]), "/polylines/0"),
        (_doc(polylines=[{"id": "a", "points": [[0, 0], [0, 0]]}]), "/polylines/0"),
        (_doc(polylines=[{"id": "a", "points": [[0, 0], [1, 1]]}, {"id": "a", "points": [[2, 0], [3, 1]]}]), "/polylines"),
    ],
)
def test_schema_errors(data, pointer):
    with pytest.raises(SchemaError) as exc:
        parse_drawing(data)
    assert exc.value.pointer.startswith(pointer)


def test_combinatorial_unknown_point():
    data = json.dumps(
        {
            "format": "pseudolinear-drawing",
            "version": 1,
            "mode": "combinatorial",
            "points": [{"id": "a"}, {"id": "b"}],
            "strings": [{"id": "s", "nodes": ["a", "c"]}],
            "rotations": {},
            "outer": [["s", 0, "a"]],
        }
    )
    with pytest.raises(SchemaError) as exc:
        parse_drawing(data)
    assert exc.value.pointer == "/strings/0/nodes/1"


def test_rational_coordinates_serialize_as_strings():
    doc = parse_drawing(_doc(polylines=[{"id": "a", "points": [["1/2", 0], [3, "7/3"]]}]))
    assert json.loads(serialize_drawing(doc))["polylines"][0]["points"] == [["1/2", 0], [3, "7/3"]]
