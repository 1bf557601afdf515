from __future__ import annotations

import pytest

from pseudolinear.errors import CapExceeded, NoObstruction, NotGood
from pseudolinear.forbidden import classify_config, defining_cycle, extract_forbidden, verify_standalone
from pseudolinear.ingest import Polyline, polylines_to_stringset
from pseudolinear.obstruction import is_obstruction

EXPECTED = {
    "FIX_B": ((2, 3), ["dot", "dot", "crossing"]),
    "FIX_W": ((2, 4), ["dot", "crossing", "dot", "crossing"]),
    "FIX_TRI": ((0, 3), ["crossing", "crossing", "crossing"]),
    "FIX_DOT3": ((1, 3), ["dot", "crossing", "crossing"]),
    "FIX_K4X_OUT": ((2, 3), ["dot", "dot", "crossing"]),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_classes(sigma, name):
    cfg = extract_forbidden(sigma(name))
    cls, kinds = EXPECTED[name]
    assert classify_config(cfg) == cls
    assert [j.kind for j in cfg.junctions] == kinds


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_standalone_is_obstruction(sigma, name):
    cfg = extract_forbidden(sigma(name))
    ok, rb = verify_standalone(cfg)
    assert ok and len(rb) == cfg.rainbows
    # the same through coordinates alone
    g = polylines_to_stringset(cfg.to_doc().polylines)
    assert is_obstruction(g, defining_cycle(g))[0]


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_pieces_are_subwalks_of_distinct_arcs(sigma, name):
    ss = sigma(name)
    cfg = extract_forbidden(ss)
    assert len({s.source for s in cfg.strings}) == len(cfg.strings)
    for s in cfg.strings:
        core = [p for p in s.nodes if "~" not in p]
        walk = list(ss.strings[s.source].nodes)
        n = len(core)
        windows = [walk[i : i + n] for i in range(len(walk) - n + 1)]
        assert core in windows or core[::-1] in windows
        assert set(s.segments) <= set(ss.strings[s.source].segments)


def test_fix_b_json(sigma):
    js = extract_forbidden(sigma("FIX_B")).to_json()
    assert js["class"] == {"rainbows": 2, "strings": 3}
    assert js["cycle"] == ["p0", "p4", "p2"]
    assert js["points"]["p2~s0"] == ["9/2", 6]
    assert js["strings"][0] == {"id": "s1", "source": "s1", "nodes": ["p0", "p4"], "extended": [False, False]}


def test_pseudolinear_input(sigma):
    with pytest.raises(NoObstruction):
        extract_forbidden(sigma("FIX_X"))


def test_not_good():
    ss = polylines_to_stringset(
        [Polyline("a", ((0, 0), (4, 4), (8, 0))), Polyline("b", ((0, 2), (8, 2)))]
    )
    with pytest.raises(NotGood):
        extract_forbidden(ss)


def test_cap(sigma):
    with pytest.raises(CapExceeded):
        extract_forbidden(sigma("FIX_W"), vertex_cap=4)
