from __future__ import annotations

import pytest

from pseudolinear.errors import EndsAlternate, InvalidInput, ObstructionPresent, StepBudgetExceeded
from pseudolinear.extension import (
    connect_components,
    counted_budget,
    disentangle_candidates,
    exterior_meeting_step,
    extend_to_arrangement,
    nominal_budget,
    outer_end_order,
    step_budget,
    verify_arrangement,
)
from pseudolinear.obstruction import find_obstruction


def wiring(arr):
    return {w["string"]: [c[0] for c in w["crossings"]] for w in arr.to_json()["wiring"]}


def test_fix_x_is_already_an_arrangement(sigma):
    arr, trace = extend_to_arrangement(sigma("FIX_X"))
    assert trace.steps == []
    assert wiring(arr) == {"s0": ["s1"], "s1": ["s0"]}
    assert arr.ray_ends["s0"] == ("p0", "p4")


def test_fix_par_one_crossing(sigma):
    arr, trace = extend_to_arrangement(sigma("FIX_PAR"))
    assert trace.connectors == ["conn1"]
    assert [s.kind for s in trace.steps].count("exterior-meeting") == 1
    assert len(trace.steps) == 7
    assert arr.to_json()["wiring"] == [
        {"string": "s0", "crossings": [["s1", "q8"]]},
        {"string": "s1", "crossings": [["s0", "q8"]]},
    ]
    assert verify_arrangement(arr) == []


@pytest.mark.parametrize("name", ["FIX_FOREST", "FIX_K4X_IN", "FIX_K4_PLANAR"])
def test_every_pair_crosses_once(sigma, name):
    arr, trace = extend_to_arrangement(sigma(name))
    assert verify_arrangement(arr) == []
    w = wiring(arr)
    ids = sorted(w)
    for s in ids:
        assert sorted(w[s]) == sorted(t for t in ids if t != s)
    assert len(trace.steps) <= trace.nominal_budget


def test_states_stay_obstruction_free(sigma):
    seen = []

    def check(ss, rec):
        seen.append(rec)
        assert find_obstruction(ss) is None
        assert len(ss.component_points()) == 1

    _, trace = extend_to_arrangement(sigma("FIX_FOREST"), on_state=check)
    assert seen[0] is None and len(seen) == len(trace.steps) + 1


def test_pair_count_never_drops(sigma):
    _, trace = extend_to_arrangement(sigma("FIX_K4_PLANAR"))
    for rec in trace.steps:
        assert rec.pairs_after >= rec.pairs_before
        if rec.kind != "disentangle":
            assert rec.pairs_after > rec.pairs_before
    stalls = [i for i, r in enumerate(trace.steps) if r.pairs_after == r.pairs_before]
    assert stalls == trace.relaxations


def test_extension_is_idempotent(sigma):
    arr, _ = extend_to_arrangement(sigma("FIX_PAR"))
    _, again = extend_to_arrangement(arr.strings)
    assert again.steps == [] and again.connectors == []


def test_obstructed_input_rejected(sigma):
    with pytest.raises(ObstructionPresent):
        extend_to_arrangement(sigma("FIX_B"))


def test_budget_is_enforced(sigma):
    with pytest.raises(StepBudgetExceeded):
        extend_to_arrangement(sigma("FIX_FOREST"), budget=3)


def test_budgets(sigma):
    ss, connectors = connect_components(sigma("FIX_PAR"))
    assert connectors == ["conn1"]
    assert nominal_budget(ss) == 12
    assert step_budget(ss) == max(nominal_budget(ss), counted_budget(ss))


def test_exterior_meeting_preconditions(sigma):
    ss = sigma("FIX_X")
    assert outer_end_order(ss) == ["p0", "p1", "p4", "p3"]
    with pytest.raises(InvalidInput):
        exterior_meeting_step(ss, "s0", "s1")
    with pytest.raises(InvalidInput):
        outer_end_order(sigma("FIX_PAR"))
    assert issubclass(EndsAlternate, InvalidInput)


def test_disentangle_candidates_single_segment(sigma):
    # an end of degree 1 has a single gap in its rotation
    assert disentangle_candidates(sigma("FIX_X"), "s0", 0) == [0]


def test_verify_catches_a_broken_arrangement(sigma):
    arr2, _ = extend_to_arrangement(sigma("FIX_PAR"))
    # the original pair without its extension does not cross
    arr2.strings = sigma("FIX_PAR")
    assert "pair s0, s1 does not cross" in verify_arrangement(arr2)
