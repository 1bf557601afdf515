"""Good drawings of graphs and the B-configuration test for complete graphs."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import EquivalenceViolated, NotComplete, NotGood
from .obstruction import ObstructionReport, find_obstruction, is_obstruction
from .planegraph import CycleRef, cycle_from_edges, cycle_interior, rotation_inside, vertex_key
from .stringset import StringSet


@dataclass
class GoodDrawing:
    """A good drawing: every string is the arc of one graph edge.

    Attributes:
        vertices: Graph vertices (point ids), sorted.
        edges: Edge ``frozenset({u, v})`` to the id of its string.
        sigma: The underlying string set.
    """

    vertices: tuple[str, ...]
    edges: dict[frozenset, str]
    sigma: StringSet

    def ends(self, sid: str) -> tuple[str, str]:
        return self.sigma.strings[sid].ends

    @property
    def is_complete(self) -> bool:
        n = len(self.vertices)
        return len(self.edges) == n * (n - 1) // 2


@dataclass
class BWitness:
    path: tuple[str, str, str, str]
    crossing: str
    cycle: CycleRef

    def to_json(self) -> dict:
        return {"path": list(self.path), "crossing": self.crossing, "cycle": list(self.cycle.vertices)}


def good_drawing_violations(ss: StringSet, vertices=None) -> list[str]:
    """Everything that keeps ``ss`` from being a good drawing."""
    out = []
    ends = {p for s in ss.strings.values() for p in s.ends}
    vset = set(vertices) if vertices is not None else ends
    for s in ss.strings.values():
        a, b = s.ends
        if a not in vset or b not in vset:
            out.append(f"string {s.id} does not join two graph vertices")
        if len(set(s.nodes)) != len(s.nodes):
            out.append(f"edge {s.id} self-intersects")
        for p in s.nodes[1:-1]:
            if p in vset:
                out.append(f"edge {s.id} passes through vertex {p}")
    at: dict[str, list[str]] = {}
    for s in ss.strings.values():
        for p in set(s.nodes):
            at.setdefault(p, []).append(s.id)
    shared: dict[tuple[str, str], int] = {}
    for ids in at.values():
        for pair in combinations(sorted(ids), 2):
            shared[pair] = shared.get(pair, 0) + 1
    for (a, b), k in sorted(shared.items()):
        if k >= 2:
            ea, eb = set(ss.strings[a].ends), set(ss.strings[b].ends)
            if ea & eb:
                out.append(f"adjacent edges {a} and {b} cross")
            else:
                out.append(f"edges {a} and {b} share {k} points")
    return out


def validate_good_drawing(ss: StringSet, vertices=None) -> GoodDrawing:
    """Check the good-drawing conditions.

    Raises:
        NotGood: with the list of violations.
    """
    bad = good_drawing_violations(ss, vertices)
    if bad:
        raise NotGood(bad)
    vs = set(vertices) if vertices is not None else {p for s in ss.strings.values() for p in s.ends}
    edges = {}
    for s in ss.strings.values():
        edges[frozenset(s.ends)] = s.id
    return GoodDrawing(tuple(sorted(vs, key=vertex_key)), edges, ss)


def _subwalk_segments(ss: StringSet, sid: str, p: str, q: str) -> list[int]:
    s = ss.strings[sid]
    i, j = s.nodes.index(p), s.nodes.index(q)
    if i > j:
        i, j = j, i
    return list(s.segments[i:j])


def find_b_configuration(gd: GoodDrawing) -> BWitness | None:
    """Look for a crossing x of ab and cd closed up by an edge uv, u in ab, v in cd,
    whose two remaining tails at x both lie inside the cycle x-u-v."""
    if not gd.is_complete:
        raise NotComplete(f"{len(gd.edges)} edges on {len(gd.vertices)} vertices")
    ss = gd.sigma
    m = ss.plane_map()
    seg_edge = m.segment_edge
    vset = set(gd.vertices)
    for x in sorted(ss.incident, key=vertex_key):
        if x in vset:
            continue
        through = sorted(ss.string_ids_at(x))
        for s1, s2 in combinations(through, 2):
            a, b = gd.ends(s1)
            c, d = gd.ends(s2)
            for u in sorted((a, b), key=vertex_key):
                for v in sorted((c, d), key=vertex_key):
                    uv = gd.edges[frozenset((u, v))]
                    segs = (
                        _subwalk_segments(ss, s1, x, u)
                        + _subwalk_segments(ss, uv, u, v)
                        + _subwalk_segments(ss, s2, v, x)
                    )
                    eids = sorted({seg_edge[sg][0] for sg in segs})
                    cyc = cycle_interior(m, cycle_from_edges(m, eids))
                    inside = set(rotation_inside(m, cyc, x))
                    tails = [dd for dd in m.rotation[x] if dd.edge not in set(cyc.edges)]
                    if all(t in inside for t in tails):
                        u2 = b if u == a else a
                        v2 = d if v == c else c
                        return BWitness((u2, u, v, v2), x, cyc)
    return None


@dataclass
class Theorem4Report:
    b_witness: BWitness | None
    obstruction: ObstructionReport | None

    @property
    def pseudolinear(self) -> bool:
        return self.obstruction is None

    def to_json(self) -> dict:
        return {
            "b_configuration": self.b_witness.to_json() if self.b_witness else None,
            "obstruction": self.obstruction.to_json() if self.obstruction else None,
            "pseudolinear": self.pseudolinear,
        }


def theorem4_crosscheck(gd: GoodDrawing, cap: int = 16) -> Theorem4Report:
    """B configuration present iff an obstruction exists.

    Raises:
        EquivalenceViolated: the two answers disagree (a bug).
    """
    w = find_b_configuration(gd)
    obs = find_obstruction(gd.sigma, cap=cap)
    if (w is None) != (obs is None):
        raise EquivalenceViolated(
            f"B configuration {'found' if w else 'absent'} but obstruction {'found' if obs else 'absent'}"
        )
    if w is not None:
        ok, rb = is_obstruction(gd.sigma, w.cycle)
        if not ok or len(rb) != 2:
            raise EquivalenceViolated(f"B cycle has {len(rb)} rainbows")
    return Theorem4Report(w, obs)
