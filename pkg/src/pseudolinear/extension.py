"""Extend an obstruction-free string set to an arrangement of pseudolines.

The driver first joins the components with connector strings, then applies
three kinds of step until every two strings meet:

* disentangle: an end of degree at least two is pushed slightly into a face;
* face escape: an end of degree one inside an inner face is run to a point
  on the boundary of that face;
* exterior meeting: two disjoint strings are extended to meet in the outer
  face.

Each step tries its candidates in a fixed order and keeps the first one for
which the obstruction search finds nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Callable

from .errors import (
    EndsAlternate,
    InternalInconsistency,
    InvalidInput,
    ObstructionPresent,
    StepBudgetExceeded,
)
from .obstruction import find_obstruction
from .planegraph import Dart, vertex_key
from .stringset import (
    StringSet,
    _alternate,
    add_connector_string,
    add_segment,
    component_nesting,
    split_segment,
)


@dataclass
class StepRecord:
    """One accepted step.

    Attributes:
        kind: "disentangle", "face-escape" or "exterior-meeting".
        string: The string extended (the first one for exterior meeting).
        candidate: Label of the accepted candidate.
        tried: ``(label, outcome)`` for every candidate looked at, in order.
        pairs_before: Intersecting string pairs before the step.
        pairs_after: Intersecting string pairs after the step.
    """

    kind: str
    string: str
    candidate: str
    tried: list[tuple[str, str]]
    pairs_before: int
    pairs_after: int

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "string": self.string,
            "candidate": self.candidate,
            "tried": [list(t) for t in self.tried],
            "pairs_before": self.pairs_before,
            "pairs_after": self.pairs_after,
        }


@dataclass
class ExtensionTrace:
    connectors: list[str] = field(default_factory=list)
    steps: list[StepRecord] = field(default_factory=list)
    budget: int = 0
    nominal_budget: int = 0
    relaxations: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "connectors": list(self.connectors),
            "steps": [s.to_json() for s in self.steps],
            "budget": self.budget,
            "nominal_budget": self.nominal_budget,
            "relaxations": list(self.relaxations),
        }


@dataclass
class PseudolineArrangement:
    """The extended strings, read as pseudolines.

    Attributes:
        strings: The final string set (connectors included).
        wiring: Per input string, the ``(other string, point)`` crossings
            along it, in order; connectors are left out.
        ray_ends: Per input string, its two ends; both are continued to
            infinity through the outer face.
        connectors: Ids of the strings added to join components.
        original: The input string set.
    """

    strings: StringSet
    wiring: dict[str, list[tuple[str, str]]]
    ray_ends: dict[str, tuple[str, str]]
    connectors: tuple[str, ...]
    original: StringSet

    def to_json(self) -> dict:
        ids = sorted(self.wiring, key=vertex_key)
        return {
            "strings": [
                {"id": s, "nodes": list(self.strings.strings[s].nodes), "ray_ends": list(self.ray_ends[s])}
                for s in ids
            ],
            "wiring": [{"string": s, "crossings": [list(c) for c in self.wiring[s]]} for s in ids],
            "connectors": list(self.connectors),
        }


# -- helpers -----------------------------------------------------------------------


def _end_point(ss: StringSet, sid: str, end: int) -> str:
    s = ss.strings[sid]
    return s.nodes[-1] if end else s.nodes[0]


def _end_segment(ss: StringSet, sid: str, end: int) -> int:
    s = ss.strings[sid]
    return s.segments[-1] if end else s.segments[0]


def _met_strings(ss: StringSet, sid: str) -> set[str]:
    out = set()
    for p in set(ss.strings[sid].nodes):
        out |= ss.string_ids_at(p)
    out.discard(sid)
    return out


def _obstructed(ss: StringSet) -> bool:
    return find_obstruction(ss) is not None


def _sorted_ids(ss: StringSet) -> list[str]:
    return sorted(ss.strings, key=vertex_key)


# -- the three steps -----------------------------------------------------------------


def disentangle_candidates(ss: StringSet, sid: str, end: int) -> list[int]:
    """Segments at the end point after which the extension may be inserted.

    Going counterclockwise from the end segment e0 of ``sid``, the strings
    passing through the point show up as f1..ft and then again as f1'..ft'.
    The extension has to enter the angle between ft and f1'; each gap there
    is one candidate.  Without such strings every gap is a candidate.
    """
    a = _end_point(ss, sid, end)
    e0 = _end_segment(ss, sid, end)
    rot = list(ss.rotation_at(a))
    i = rot.index(e0)
    ring = rot[i:] + rot[:i]
    strings = [ss.segment_string(s) for s in ring]
    count: dict[str, int] = {}
    for t in strings:
        count[t] = count.get(t, 0) + 1
    twin_pos = [k for k, t in enumerate(strings) if count[t] == 2]
    if not twin_pos:
        return ring
    t = len(twin_pos) // 2
    first = [strings[k] for k in twin_pos[:t]]
    second = [strings[k] for k in twin_pos[t:]]
    if first != second:
        raise InternalInconsistency(f"strings touch tangentially at {a!r}")
    lo, hi = twin_pos[t - 1], twin_pos[t]
    return ring[lo:hi]


def disentangle_step(ss: StringSet, sid: str, end: int) -> tuple[StringSet, StepRecord]:
    """Push the ``end`` of ``sid`` (degree >= 2) a little into a face.

    Raises:
        InvalidInput: the end has degree one.
        InternalInconsistency: every candidate creates an obstruction.
    """
    a = _end_point(ss, sid, end)
    if ss.degree(a) < 2:
        raise InvalidInput(f"end {a!r} of {sid!r} has degree 1")
    before = ss.intersecting_pairs()
    tried = []
    q = ss.fresh_point_id("q")
    for i, after in enumerate(disentangle_candidates(ss, sid, end)):
        label = f"gap{i}:after-segment-{after}"
        cand, _ = add_segment(ss, sid, end, q, after, None)
        if _obstructed(cand):
            tried.append((label, "obstruction"))
            continue
        tried.append((label, "accepted"))
        return cand, StepRecord("disentangle", sid, label, tried, before, cand.intersecting_pairs())
    raise InternalInconsistency(f"no obstruction-free way to disentangle {sid!r} at {a!r}")


def _face_walk_from(ss: StringSet, a: str) -> tuple[int, list[Dart]]:
    m = ss.plane_map()
    (d,) = m.rotation[a]
    f = m.face_of[d]
    walk = list(m.faces[f])
    i = walk.index(d)
    return f, walk[i:] + walk[:i]


def face_escape_candidates(ss: StringSet, sid: str, end: int) -> list[tuple[str, object]]:
    """The targets (m1, x1, m2, ..., x_{n-1}, m_n) along the boundary walk.

    ``("m", dart)`` is the middle of the edge of ``dart``; ``("x", (point,
    outgoing segment))`` is a corner of the walk.
    """
    m = ss.plane_map()
    a = _end_point(ss, sid, end)
    _, walk = _face_walk_from(ss, a)
    out: list[tuple[str, object]] = []
    for k, d in enumerate(walk):
        out.append(("m", d))
        if k + 1 < len(walk):
            nxt = walk[k + 1]
            out.append(("x", (m.origin(nxt), ss.dart_segments(nxt)[0][0])))
    return out


def _attach_midpoint(ss: StringSet, sid: str, end: int, d: Dart) -> tuple[StringSet, str]:
    m = ss.plane_map()
    e = m.edges[d.edge]
    k = len(e.segments) // 2
    seg = e.segments[k]
    # direction of the walk along this segment
    frm = e.points[k + 1] if d.rev else e.points[k]
    pid = ss.fresh_point_id("q")
    ss2, pid, first, second = split_segment(ss, seg, pid)
    a_, _ = ss.segment_ends(seg)
    outgoing = second if frm == a_ else first
    out, _ = add_segment(ss2, sid, end, pid, None, outgoing)
    return out, pid


def face_escape_step(ss: StringSet, sid: str, end: int) -> tuple[StringSet, StepRecord]:
    """Run the degree-one ``end`` of ``sid`` across its inner face to the boundary.

    Targets on ``sid`` itself, or on a string ``sid`` already meets, would make
    two strings share two points and are skipped without a search.

    Raises:
        InvalidInput: the end is not a degree-one end on an inner face.
        InternalInconsistency: every candidate creates an obstruction.
    """
    m = ss.plane_map()
    a = _end_point(ss, sid, end)
    if ss.degree(a) != 1:
        raise InvalidInput(f"end {a!r} of {sid!r} does not have degree 1")
    f, _ = _face_walk_from(ss, a)
    if f in m.outer_faces.values():
        raise InvalidInput(f"end {a!r} of {sid!r} lies on the outer face")
    met = _met_strings(ss, sid) | {sid}
    before = ss.intersecting_pairs()
    tried = []
    for i, (kind, c) in enumerate(face_escape_candidates(ss, sid, end)):
        if kind == "m":
            label = f"m{i // 2 + 1}:edge-{c.edge}"
            hit = {m.edges[c.edge].string}
        else:
            p, out_seg = c
            label = f"x{i // 2 + 1}:{p}"
            hit = ss.string_ids_at(p)
        if hit & met:
            tried.append((label, "meets a string twice"))
            continue
        if kind == "m":
            cand, _ = _attach_midpoint(ss, sid, end, c)
        else:
            cand, _ = add_segment(ss, sid, end, p, None, out_seg)
        if _obstructed(cand):
            tried.append((label, "obstruction"))
            continue
        tried.append((label, "accepted"))
        return cand, StepRecord("face-escape", sid, label, tried, before, cand.intersecting_pairs())
    raise InternalInconsistency(f"no obstruction-free face escape for {sid!r} at {a!r}")


def outer_end_order(ss: StringSet) -> list[str]:
    """Degree-one string ends in the order of the outer boundary walk (clockwise)."""
    m = ss.plane_map()
    if len(m.components) != 1:
        raise InvalidInput("the string set must be connected")
    f = m.outer_faces[0]
    out = []
    for d in m.faces[f]:
        v = m.origin(d)
        if ss.degree(v) == 1:
            out.append(v)
    return out


def exterior_meeting_step(ss: StringSet, s1: str, s2: str) -> tuple[StringSet, StepRecord]:
    """Extend the disjoint strings ``s1`` and ``s2`` to meet in the outer face.

    Counterclockwise along the outer boundary the ends read a1, b1, b2, a2.
    The a-ends are joined through a fresh point p so that the new arc and the
    boundary from a2 to a1 enclose an empty face; the outer face keeps b1
    and b2.

    Raises:
        InvalidInput: an end is not a degree-one end on the outer face, or
            the strings meet.
        EndsAlternate: the ends alternate along the outer boundary.
    """
    if _met_strings(ss, s1) & {s2}:
        raise InvalidInput(f"{s1!r} and {s2!r} already meet")
    order = outer_end_order(ss)
    pos = {p: i for i, p in enumerate(order)}
    ends1 = ss.strings[s1].ends
    ends2 = ss.strings[s2].ends
    for p in ends1 + ends2:
        if p not in pos:
            raise InvalidInput(f"end {p!r} is not a degree-1 end on the outer face")
    four = sorted(ends1 + ends2, key=pos.__getitem__)
    tag = [1 if p in ends1 else 2 for p in four]
    if tag in ([1, 2, 1, 2], [2, 1, 2, 1]):
        raise EndsAlternate(f"ends of {s1!r} and {s2!r} alternate on the outer face")
    # clockwise the four ends read a1, a2, b2, b1
    k = next(i for i in range(4) if tag[i] == 1 and tag[(i + 1) % 4] == 2)
    a1, a2 = four[k], four[(k + 1) % 4]
    before = ss.intersecting_pairs()
    p = ss.fresh_point_id("q")
    end1 = 0 if ss.strings[s1].nodes[0] == a1 else 1
    end2 = 0 if ss.strings[s2].nodes[0] == a2 else 1
    out, seg1 = add_segment(ss, s1, end1, p, None, None)
    out, _ = add_segment(out, s2, end2, p, None, None)
    out = out._replace(outer={(seg1, a1)})
    label = f"{a1}-{p}-{a2}"
    rec = StepRecord("exterior-meeting", s1, label, [(label, "accepted")], before, out.intersecting_pairs())
    return out, rec


# -- driver --------------------------------------------------------------------------


def connect_components(ss: StringSet) -> tuple[StringSet, list[str]]:
    """Join all components with connector strings drawn inside shared faces.

    Nesting is read once from the input coordinates.  A nested component is
    tied to the component around it through the enclosing face; the
    remaining top-level components are then chained through the outer face.
    """
    m = ss.plane_map()
    if len(m.components) <= 1:
        return ss, []
    nest = component_nesting(ss)
    rep = {c: min(m.components[c], key=vertex_key) for c in range(len(m.components))}
    handles = {}
    for c, where in nest.items():
        if where is not None:
            handles[c] = ss.face_handle(where[1])
    outer_anchor = {}
    for a in sorted(ss.outer):
        d = ss.anchor_dart(a)
        outer_anchor.setdefault(m.component_of[m.origin(d)], a)
    added = []
    for c in sorted(handles, key=lambda c: vertex_key(rep[c])):
        host = rep[nest[c][0]]
        ss = add_connector_string(ss, host, rep[c], handles[c], outer_anchor[c])
        added.append(max(ss.connectors - set(added), key=vertex_key))
    tops = sorted((c for c in nest if nest[c] is None), key=lambda c: vertex_key(rep[c]))
    for c in tops[1:]:
        ss = add_connector_string(ss, rep[tops[0]], rep[c])
        added.append(max(ss.connectors - set(added), key=vertex_key))
    return ss, added


def _next_action(ss: StringSet):
    m = ss.plane_map()
    outer = set(m.outer_faces.values())
    ids = _sorted_ids(ss)
    for sid in ids:
        for end in (0, 1):
            if ss.degree(_end_point(ss, sid, end)) >= 2:
                return ("disentangle", sid, end)
    for sid in ids:
        for end in (0, 1):
            a = _end_point(ss, sid, end)
            (d,) = m.rotation[a]
            if m.face_of[d] not in outer:
                return ("face-escape", sid, end)
    at: dict[str, set[str]] = {}
    for s in ss.strings.values():
        for p in s.nodes:
            at.setdefault(p, set()).add(s.id)
    meets = {(a, b) for ids_ in at.values() for a, b in combinations(sorted(ids_, key=vertex_key), 2)}
    for a, b in combinations(ids, 2):
        if (a, b) not in meets:
            return ("exterior-meeting", a, b)
    return None


def nominal_budget(ss: StringSet) -> int:
    """C(n, 2) + n + total node count."""
    n = len(ss.strings)
    return comb(n, 2) + n + sum(len(s.nodes) for s in ss.strings.values())


def counted_budget(ss: StringSet) -> int:
    """D + 3 (C(n, 2) - P), with D the ends of degree >= 2 and P the meeting pairs.

    Face escapes and exterior meetings each add a meeting pair, so there are
    at most C(n, 2) - P of them.  A disentangle step uses up one end of degree
    >= 2; a face escape makes one such end and an exterior meeting two.
    """
    n = len(ss.strings)
    d = sum(1 for s in ss.strings.values() for p in s.ends if ss.degree(p) >= 2)
    return d + 3 * (comb(n, 2) - ss.intersecting_pairs())


def step_budget(ss: StringSet) -> int:
    return max(nominal_budget(ss), counted_budget(ss))


def extend_to_arrangement(
    sigma: StringSet,
    on_state: Callable[[StringSet, StepRecord | None], None] | None = None,
    budget: int | None = None,
) -> tuple[PseudolineArrangement, ExtensionTrace]:
    """Extend every string of ``sigma`` to a pseudoline.

    Args:
        sigma: An obstruction-free string set.
        on_state: Called with every intermediate state and the step that
            produced it (``None`` after the connect phase).
        budget: Step limit; defaults to the larger of the nominal budget
            C(n, 2) + n + total node count and the counted bound, both taken
            on the connected string set.

    Raises:
        ObstructionPresent: ``sigma`` has an obstruction.
        StepBudgetExceeded: more steps than the budget.
    """
    rep = find_obstruction(sigma)
    if rep is not None:
        raise ObstructionPresent(f"obstruction through {', '.join(rep.cycle.vertices)}")
    ss, connectors = connect_components(sigma)
    trace = ExtensionTrace(connectors=connectors)
    trace.nominal_budget = nominal_budget(ss)
    trace.budget = budget if budget is not None else step_budget(ss)
    if on_state is not None:
        on_state(ss, None)
    while True:
        act = _next_action(ss)
        if act is None:
            break
        if len(trace.steps) >= trace.budget:
            raise StepBudgetExceeded(f"more than {trace.budget} steps")
        kind = act[0]
        if kind == "disentangle":
            ss, rec = disentangle_step(ss, act[1], act[2])
        elif kind == "face-escape":
            ss, rec = face_escape_step(ss, act[1], act[2])
        else:
            ss, rec = exterior_meeting_step(ss, act[1], act[2])
        if rec.pairs_after < rec.pairs_before:
            raise InternalInconsistency(f"{kind} step lowered the intersecting pair count")
        if rec.pairs_after == rec.pairs_before:
            if kind != "disentangle":
                raise InternalInconsistency(f"{kind} step did not add an intersecting pair")
            trace.relaxations.append(len(trace.steps))
        trace.steps.append(rec)
        if on_state is not None:
            on_state(ss, rec)
    arr = _finalize(ss, sigma, tuple(connectors))
    return arr, trace


def _finalize(ss: StringSet, original: StringSet, connectors: tuple[str, ...]) -> PseudolineArrangement:
    keep = [sid for sid in _sorted_ids(ss) if sid not in connectors]
    wiring = {}
    for sid in keep:
        seq = []
        for p in ss.strings[sid].nodes[1:-1]:
            for other in sorted(ss.string_ids_at(p) - {sid}, key=vertex_key):
                if other not in connectors:
                    seq.append((other, p))
        wiring[sid] = seq
    ray_ends = {sid: ss.strings[sid].ends for sid in keep}
    return PseudolineArrangement(ss, wiring, ray_ends, connectors, original)


def verify_arrangement(arr: PseudolineArrangement) -> list[str]:
    """Everything that keeps ``arr`` from being a pseudoline arrangement.

    An empty list means: every two strings share exactly one point and cross
    there, every end has degree one on the outer face, and every input string
    survives as a piece of its extension.
    """
    ss = arr.strings
    out = []
    ids = [sid for sid in _sorted_ids(ss) if sid not in arr.connectors]
    m = ss.plane_map()
    outer = set(m.outer_faces.values())
    for sid in ids:
        s = ss.strings[sid]
        if len(set(s.nodes)) != len(s.nodes):
            out.append(f"string {sid} meets itself")
        for p in s.ends:
            if ss.degree(p) != 1:
                out.append(f"end {p} of {sid} has degree {ss.degree(p)}")
                continue
            (d,) = m.rotation[p]
            if m.face_of[d] not in outer:
                out.append(f"end {p} of {sid} is not on the outer face")
    for a, b in combinations(ids, 2):
        shared = sorted(set(ss.strings[a].nodes) & set(ss.strings[b].nodes), key=vertex_key)
        if not shared:
            out.append(f"pair {a}, {b} does not cross")
            continue
        if len(shared) > 1:
            out.append(f"pair {a}, {b} crosses {'twice' if len(shared) == 2 else f'{len(shared)} times'}")
        for p in shared:
            rot = ss.rotation_at(p) if ss.degree(p) >= 3 else ()
            interior = p not in ss.strings[a].ends and p not in ss.strings[b].ends
            if not interior or not _alternate(ss, rot, a, b):
                out.append(f"non-transversal intersection of {a}, {b} at {p}")
    for s in arr.original.strings.values():
        if s.id not in ss.strings:
            out.append(f"input string {s.id} is missing")
            continue
        kept = [p for p in ss.strings[s.id].nodes if p in arr.original.points]
        n = len(s.nodes)
        if not any(tuple(kept[i : i + n]) == s.nodes for i in range(len(kept) - n + 1)):
            out.append(f"input string {s.id} is not a piece of its extension")
    return out
