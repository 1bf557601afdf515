"""The master representation: strings as node sequences over shared points.

Every string is a walk ``nodes[0], ..., nodes[-1]`` over point ids.  The piece
between two consecutive nodes is a *segment* with a globally unique integer
id.  Rotations are stored per point as counterclockwise tuples of segment ids
(only needed where a point has three or more incident segments).  The outer
face of every connected component is remembered through *anchors*: directed
segments ``(segment, from_point)`` whose left side is that outer face.

The plane graph G(Σ) is always derived.  Its vertices are the string ends,
the points with three or more incident segments, and pinned points; its edges
are the maximal chains of segments between vertices.  An edge takes the id of
its first segment, so identifiers are stable across rebuilds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import (
    InvalidInput,
    MissingOuterFace,
    NoSharedFace,
    UnknownEdge,
    UnknownVertex,
    VertexNotOnOuterFace,
)
from .geometry import Point, direction_key, winding_number
from .planegraph import Dart, Edge, PlaneMap, vertex_key

Anchor = tuple[int, str]


@dataclass(frozen=True)
class PointRef:
    id: str
    coords: Point | None = None
    provenance: tuple[str, ...] = ()


@dataclass(frozen=True)
class StringWalk:
    id: str
    nodes: tuple[str, ...]
    segments: tuple[int, ...]
    origin: str = ""

    @property
    def closed_end_touch(self) -> tuple[bool, bool]:
        return (self.nodes[0] in self.nodes[1:], self.nodes[-1] in self.nodes[:-1])

    @property
    def ends(self) -> tuple[str, str]:
        return (self.nodes[0], self.nodes[-1])


@dataclass(frozen=True)
class Violation:
    kind: str  # "tangency" | "self-crossing" | "overlap" | "structure"
    point: str
    strings: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.kind} at {self.point} ({', '.join(self.strings)})"


@dataclass
class ValidationReport:
    ok: bool
    violations: list[Violation]
    crossings: int


class StringSet:
    """An immutable string set.  All operations return new instances."""

    def __init__(
        self,
        points: Mapping[str, PointRef],
        strings: Iterable[StringWalk],
        rotation: Mapping[str, Sequence[int]],
        outer: Iterable[Anchor] = (),
        pinned: Iterable[str] = (),
        connectors: Iterable[str] = (),
    ):
        self.points: dict[str, PointRef] = dict(points)
        self.strings: dict[str, StringWalk] = {}
        for s in strings:
            if s.id in self.strings:
                raise InvalidInput(f"duplicate string id {s.id!r}")
            self.strings[s.id] = s
        self.rotation: dict[str, tuple[int, ...]] = {p: tuple(r) for p, r in rotation.items()}
        self.outer: frozenset[Anchor] = frozenset(outer)
        self.pinned: frozenset[str] = frozenset(pinned)
        self.connectors: frozenset[str] = frozenset(connectors)
        self._map: PlaneMap | None = None
        self._index()

    # -- indexing ------------------------------------------------------------

    def _index(self) -> None:
        self.seg_loc: dict[int, tuple[str, int]] = {}
        self.incident: dict[str, list[int]] = {}
        for s in self.strings.values():
            if len(s.nodes) < 2 or len(s.segments) != len(s.nodes) - 1:
                raise InvalidInput(f"string {s.id!r} needs >= 2 nodes and one segment per gap")
            for k, seg in enumerate(s.segments):
                a, b = s.nodes[k], s.nodes[k + 1]
                if a == b:
                    raise InvalidInput(f"string {s.id!r} repeats node {a!r} consecutively")
                if seg in self.seg_loc:
                    raise InvalidInput(f"segment id {seg} used twice")
                self.seg_loc[seg] = (s.id, k)
                self.incident.setdefault(a, []).append(seg)
                self.incident.setdefault(b, []).append(seg)
            for p in s.nodes:
                if p not in self.points:
                    raise InvalidInput(f"string {s.id!r} uses unknown point {p!r}")
        self.next_segment = max(self.seg_loc, default=-1) + 1

    def _replace(self, **kw) -> "StringSet":
        args = dict(
            points=self.points,
            strings=list(self.strings.values()),
            rotation=self.rotation,
            outer=self.outer,
            pinned=self.pinned,
            connectors=self.connectors,
        )
        args.update(kw)
        return StringSet(**args)

    def fresh_point_id(self, prefix: str = "q") -> str:
        k = len(self.points)
        while f"{prefix}{k}" in self.points:
            k += 1
        return f"{prefix}{k}"

    # -- local structure -------------------------------------------------------

    def segment_ends(self, seg: int) -> tuple[str, str]:
        sid, k = self.seg_loc[seg]
        nodes = self.strings[sid].nodes
        return nodes[k], nodes[k + 1]

    def segment_string(self, seg: int) -> str:
        return self.seg_loc[seg][0]

    def other_end(self, seg: int, p: str) -> str:
        a, b = self.segment_ends(seg)
        return b if a == p else a

    def degree(self, p: str) -> int:
        return len(self.incident.get(p, ()))

    def rotation_at(self, p: str) -> tuple[int, ...]:
        inc = self.incident.get(p, [])
        stored = self.rotation.get(p)
        if stored is not None and len(stored) == len(inc) and set(stored) == set(inc):
            return stored
        if len(inc) <= 2:
            return tuple(inc)
        if stored is None:
            raise InvalidInput(f"point {p!r} has degree {len(inc)} but no rotation")
        raise InvalidInput(f"rotation at {p!r} does not match its incident segments")

    def string_ids_at(self, p: str) -> set[str]:
        return {self.seg_loc[s][0] for s in self.incident.get(p, ())}

    def used_points(self) -> set[str]:
        return set(self.incident)

    def vertex_set(self) -> set[str]:
        vs = {n for s in self.strings.values() for n in s.ends}
        vs.update(p for p, inc in self.incident.items() if len(inc) >= 3)
        vs.update(p for p in self.pinned if p in self.incident)
        return vs

    def intersecting_pairs(self) -> int:
        at: dict[str, set[str]] = {}
        for s in self.strings.values():
            for p in s.nodes:
                at.setdefault(p, set()).add(s.id)
        pairs = set()
        for ids in at.values():
            pairs.update(combinations(sorted(ids), 2))
        return len(pairs)

    def crossing_pairs(self) -> int:
        pairs = set()
        for p in self.incident:
            occ = _occurrences(self, p)
            through = sorted(sid for sid, kinds in occ.items() if "interior" in kinds)
            rot = self.rotation_at(p) if len(through) >= 2 else ()
            for a, b in combinations(through, 2):
                if _alternate(self, rot, a, b):
                    pairs.add((a, b))
        return len(pairs)

    # -- derived map -------------------------------------------------------------

    def plane_map(self) -> PlaneMap:
        if self._map is None:
            self._map = _derive_map(self)
        return self._map

    @property
    def derived_map(self) -> PlaneMap:
        return self.plane_map()

    @property
    def edge_to_string(self) -> dict[int, str]:
        return {e.id: e.string for e in self.plane_map().edges.values()}

    def edge_of_segment(self, seg: int) -> int:
        m = self.plane_map()
        return m.segment_edge[seg][0]

    def component_points(self) -> list[set[str]]:
        m = self.plane_map()
        comps: list[set[str]] = [set(c) for c in m.components]
        for e in m.edges.values():
            comps[m.component_of[e.tail]].update(e.points)
        return comps

    def has_coordinates(self, pts: Iterable[str] | None = None) -> bool:
        pts = self.incident if pts is None else pts
        return all(self.points[p].coords is not None for p in pts)

    def dart_segments(self, d: Dart) -> list[Anchor]:
        """The directed segments ``(segment, from_point)`` along dart ``d``."""
        m = self.plane_map()
        e = m.edges[d.edge]
        pairs = [(seg, e.points[i]) for i, seg in enumerate(e.segments)]
        if d.rev:
            pairs = [(seg, e.points[i + 1]) for i, seg in reversed(list(enumerate(e.segments)))]
        return pairs

    def anchor_dart(self, anchor: Anchor) -> Dart:
        m = self.plane_map()
        return _anchor_dart(self, m, anchor)

    def face_of_anchor(self, anchor: Anchor) -> int:
        return self.plane_map().face_of[self.anchor_dart(anchor)]

    def face_handle(self, f: int) -> Anchor:
        """A directed segment on face ``f`` (the first of its lowest dart)."""
        m = self.plane_map()
        d = min(m.faces[f])
        return self.dart_segments(d)[0]

    def __repr__(self) -> str:
        return f"StringSet({len(self.strings)} strings, {len(self.incident)} points)"


# -- map derivation -------------------------------------------------------------


def _derive_map(ss: StringSet) -> PlaneMap:
    vertices = ss.vertex_set()
    edges: dict[int, Edge] = {}
    seg_edge: dict[int, tuple[int, int]] = {}
    for s in ss.strings.values():
        start = 0
        idx = 0
        for k in range(1, len(s.nodes)):
            if s.nodes[k] in vertices:
                segs = s.segments[start:k]
                e = Edge(segs[0], s.id, s.nodes[start : k + 1], segs, idx)
                edges[e.id] = e
                for i, seg in enumerate(segs):
                    seg_edge[seg] = (e.id, i)
                start = k
                idx += 1
    rotation: dict[str, list[Dart]] = {}
    for v in vertices:
        darts = []
        for seg in ss.rotation_at(v):
            eid, i = seg_edge[seg]
            e = edges[eid]
            if i == 0 and e.points[0] == v:
                darts.append(Dart(eid, 0))
            else:
                darts.append(Dart(eid, 1))
        rotation[v] = darts
    hints = _outer_hints(ss, edges, seg_edge, vertices, rotation)
    m = PlaneMap(edges, rotation, hints)
    m.segment_edge = seg_edge
    return m


def _anchor_dart(ss: StringSet, m: PlaneMap, anchor: Anchor) -> Dart:
    seg, frm = anchor
    eid, i = m.segment_edge[seg]
    e = m.edges[eid]
    if e.points[i] == frm:
        return Dart(eid, 0)
    if e.points[i + 1] == frm:
        return Dart(eid, 1)
    raise InvalidInput(f"anchor {anchor} does not start at an end of segment {seg}")


def _outer_hints(ss, edges, seg_edge, vertices, rotation) -> list[Dart]:
    hints = []
    covered: set[str] = set()
    for seg, frm in sorted(ss.outer):
        if seg not in seg_edge:
            continue
        eid, i = seg_edge[seg]
        e = edges[eid]
        if e.points[i] == frm:
            hints.append(Dart(eid, 0))
        elif e.points[i + 1] == frm:
            hints.append(Dart(eid, 1))
        else:
            raise InvalidInput(f"anchor ({seg}, {frm}) does not start at an end of its segment")
        covered.add(e.string)
    # geometric fallback for components without an anchor
    missing = [s for s in ss.strings.values() if s.id not in covered]
    if missing:
        comp = _string_components(ss)
        anchored = {comp[s] for s in covered}
        for s in ss.strings.values():
            c = comp[s.id]
            if c in anchored:
                continue
            pts = {p for t in ss.strings.values() if comp[t.id] == c for p in t.nodes}
            if not ss.has_coordinates(pts):
                raise MissingOuterFace(f"no outer face designated for the component of {s.id!r}")
            seg, frm = geometric_anchor(ss, pts)
            eid, i = seg_edge[seg]
            hints.append(Dart(eid, 0) if edges[eid].points[i] == frm else Dart(eid, 1))
            anchored.add(c)
    return hints


def _string_components(ss: StringSet) -> dict[str, int]:
    parent = {sid: sid for sid in ss.strings}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    at: dict[str, str] = {}
    for s in ss.strings.values():
        for p in s.nodes:
            if p in at:
                a, b = find(at[p]), find(s.id)
                if a != b:
                    parent[a] = b
            else:
                at[p] = s.id
    roots = {}
    out = {}
    for sid in ss.strings:
        out[sid] = roots.setdefault(find(sid), len(roots))
    return out


def geometric_anchor(ss: StringSet, pts: Iterable[str]) -> Anchor:
    """Outer anchor of the component spanned by ``pts`` from coordinates.

    At the lowest (then leftmost) point every incident segment points into the
    upper half plane; the sector below is unbounded, and it is the left side
    of the segment with the largest direction angle.
    """
    p = min(pts, key=lambda q: (ss.points[q].coords[1], ss.points[q].coords[0]))
    pc = ss.points[p].coords

    def direction(seg):
        oc = ss.points[ss.other_end(seg, p)].coords
        return (oc[0] - pc[0], oc[1] - pc[1])

    seg = max(ss.incident[p], key=lambda s: direction_key(direction(s)))
    return (seg, p)


def rotation_from_coordinates(ss_points: Mapping[str, PointRef], incident: Mapping[str, list[int]], ends) -> dict[str, tuple[int, ...]]:
    """Counterclockwise rotations from exact coordinates (degree >= 3 only)."""
    rot = {}
    for p, segs in incident.items():
        if len(segs) < 3:
            continue
        pc = ss_points[p].coords

        def key(seg, p=p, pc=pc):
            a, b = ends[seg]
            oc = ss_points[b if a == p else a].coords
            return direction_key((oc[0] - pc[0], oc[1] - pc[1]))

        rot[p] = tuple(sorted(segs, key=key))
    return rot


# -- general position --------------------------------------------------------------


def _occurrences(ss: StringSet, p: str) -> dict[str, list[str]]:
    occ: dict[str, list[str]] = {}
    for s in ss.strings.values():
        n = len(s.nodes)
        for i, q in enumerate(s.nodes):
            if q == p:
                occ.setdefault(s.id, []).append("end" if i in (0, n - 1) else "interior")
    return occ


def _ports(ss: StringSet, rot: Sequence[int], sid: str) -> list[int]:
    return [i for i, seg in enumerate(rot) if ss.seg_loc[seg][0] == sid]


def _alternate(ss: StringSet, rot: Sequence[int], a: str, b: str) -> bool:
    """Do the two segments of ``a`` separate the two of ``b`` in ``rot``?"""
    pa = _ports(ss, rot, a)
    pb = _ports(ss, rot, b)
    if len(pa) != 2 or len(pb) != 2:
        return False
    lo, hi = pa
    inside = sum(1 for i in pb if lo < i < hi)
    return inside == 1


def validate_general_position(ss: StringSet) -> ValidationReport:
    """Report tangencies, interior self-crossings and malformed rotations."""
    violations: list[Violation] = []
    crossings = 0
    for p in sorted(ss.incident, key=vertex_key):
        try:
            rot = ss.rotation_at(p)
        except InvalidInput:
            violations.append(Violation("structure", p, tuple(sorted(ss.string_ids_at(p)))))
            continue
        occ = _occurrences(ss, p)
        through = []
        for sid in sorted(occ):
            kinds = occ[sid]
            if kinds.count("interior") >= 2:
                violations.append(Violation("self-crossing", p, (sid,)))
            elif "interior" in kinds:
                through.append(sid)
        for a, b in combinations(through, 2):
            if _alternate(ss, rot, a, b):
                crossings += 1
            else:
                violations.append(Violation("tangency", p, (a, b)))
    return ValidationReport(not violations, violations, crossings)


# -- construction helpers -----------------------------------------------------------


def from_walks(
    walks: Sequence[tuple[str, Sequence[str]]],
    rotation: Mapping[str, Sequence[tuple[str, int]]] | None = None,
    outer: Iterable[tuple[str, int, str]] = (),
    coords: Mapping[str, Point] | None = None,
    pinned: Iterable[str] = (),
) -> StringSet:
    """Build a string set from node lists.

    Rotations and anchors refer to segments as ``(string id, k)``, the k-th
    segment of the string.  With coordinates, missing rotations and anchors
    are derived geometrically.
    """
    seg_id: dict[tuple[str, int], int] = {}
    strings = []
    pts: dict[str, PointRef] = {}
    counter = 0
    for sid, nodes in walks:
        segs = []
        for k in range(len(nodes) - 1):
            seg_id[(sid, k)] = counter
            segs.append(counter)
            counter += 1
        strings.append(StringWalk(sid, tuple(nodes), tuple(segs), sid))
        for p in nodes:
            if p not in pts:
                c = coords.get(p) if coords else None
                pts[p] = PointRef(p, c, (p,))
    rot: dict[str, tuple[int, ...]] = {}
    if rotation:
        for p, lst in rotation.items():
            rot[p] = tuple(seg_id[(sid, k)] for sid, k in lst)
    anchors = [(seg_id[(sid, k)], frm) for sid, k, frm in outer]
    ss = StringSet(pts, strings, rot, anchors, pinned)
    if coords:
        ends = {seg: ss.segment_ends(seg) for seg in ss.seg_loc}
        derived = rotation_from_coordinates(ss.points, ss.incident, ends)
        derived.update(rot)
        ss = ss._replace(rotation=derived)
        if not anchors:
            ss = ss._replace(outer=_component_anchors(ss))
    return ss


def _component_anchors(ss: StringSet) -> set[Anchor]:
    comp = _string_components(ss)
    out = set()
    for c in sorted(set(comp.values())):
        pts = {p for s in ss.strings.values() if comp[s.id] == c for p in s.nodes}
        out.add(geometric_anchor(ss, pts))
    return out


def normalize_anchors(ss: StringSet) -> StringSet:
    """Keep one anchor per component (the smallest); checks consistency."""
    m = ss.plane_map()
    best: dict[int, Anchor] = {}
    for a in sorted(ss.outer):
        if a[0] not in m.segment_edge:
            continue
        d = _anchor_dart(ss, m, a)
        c = m.component_of[m.origin(d)]
        best.setdefault(c, a)
    if len(best) == len(ss.outer):
        return ss
    out = ss._replace(outer=set(best.values()))
    out._map = m
    return out


def _insert_rotation(ss: StringSet, rot: dict, p: str, new_seg: int, after: int | None, incident_after: list[int]) -> None:
    """Update ``rot`` at ``p`` after ``new_seg`` became incident to ``p``."""
    if len(incident_after) <= 2:
        rot.pop(p, None)
        return
    cur = list(ss.rotation_at(p))
    if after is None:
        raise InvalidInput(f"position needed to attach at {p!r}")
    i = cur.index(after)
    cur.insert(i + 1, new_seg)
    rot[p] = tuple(cur)


# -- operations ----------------------------------------------------------------------


def remove_vertex(ss: StringSet, x: str) -> StringSet:
    """Σ − x: delete an outer vertex, splitting the strings through it.

    The map edges at ``x`` are deleted with their bend points, and the
    strings using them fall apart into the remaining pieces; pieces that are
    single points disappear.  Segment ids survive, which is what maps
    every new edge back to the old edges it came from.

    Raises:
        UnknownVertex: ``x`` is not a vertex of G(Σ).
        VertexNotOnOuterFace: ``x`` does not touch the outer face.
    """
    m = ss.plane_map()
    if x not in m.rotation:
        raise UnknownVertex(f"{x!r} is not a vertex")
    if not m.is_outer_vertex(x):
        raise VertexNotOnOuterFace(f"{x!r} is not incident with the outer face")
    # whole map edges at x go, bend points included
    dead = {seg for d in m.rotation[x] for seg in m.edges[d.edge].segments}
    # faces around x merge into the outer face; their surviving sides stay outer
    faces = m.faces_at(x) | {m.outer_face_of(x)}
    anchors = set(a for a in ss.outer if a[0] not in dead)
    for f in faces:
        for d in m.faces[f]:
            anchors.update(a for a in ss.dart_segments(d) if a[0] not in dead)
    strings = []
    taken = set(ss.strings)
    for s in ss.strings.values():
        if not dead.intersection(s.segments):
            strings.append(s)
            continue
        pieces = []
        cur_n: list[str] = []
        cur_s: list[int] = []
        for k, seg in enumerate(s.segments):
            if seg in dead:
                if cur_s:
                    pieces.append((cur_n, cur_s))
                cur_n, cur_s = [], []
                continue
            if not cur_n:
                cur_n.append(s.nodes[k])
            cur_n.append(s.nodes[k + 1])
            cur_s.append(seg)
        if cur_s:
            pieces.append((cur_n, cur_s))
        if len(pieces) == 1:
            strings.append(StringWalk(s.id, tuple(pieces[0][0]), tuple(pieces[0][1]), s.origin))
            continue
        for k, (nodes, segs) in enumerate(pieces, 1):
            nid = f"{s.id}.{k}"
            while nid in taken:
                nid += "'"
            taken.add(nid)
            strings.append(StringWalk(nid, tuple(nodes), tuple(segs), s.origin))
    used = {p for s in strings for p in s.nodes}
    rot = {}
    for p, r in ss.rotation.items():
        if p == x or p not in used:
            continue
        r2 = tuple(seg for seg in r if seg not in dead)
        if len(r2) >= 3:
            rot[p] = r2
    out = StringSet(
        {p: ss.points[p] for p in used},
        strings,
        rot,
        anchors,
        (),
        {c for c in ss.connectors if any(s.id == c for s in strings)},
    )
    return normalize_anchors(out)


def split_segment(ss: StringSet, seg: int, pid: str | None = None, pin: bool = False) -> tuple[StringSet, str, int, int]:
    """Insert a fresh node in the middle of segment ``seg``.

    The first half keeps the id ``seg``; the second half gets a new id.

    Returns:
        (new string set, new point id, first half id, second half id)
    """
    sid, k = ss.seg_loc[seg]
    s = ss.strings[sid]
    a, b = s.nodes[k], s.nodes[k + 1]
    pid = pid or ss.fresh_point_id()
    s2 = ss.next_segment
    ca, cb = ss.points[a].coords, ss.points[b].coords
    coords = None
    if ca is not None and cb is not None:
        coords = ((ca[0] + cb[0]) / 2, (ca[1] + cb[1]) / 2)
    points = dict(ss.points)
    points[pid] = PointRef(pid, coords, (f"mid:{seg}",))
    nodes = s.nodes[: k + 1] + (pid,) + s.nodes[k + 1 :]
    segs = s.segments[:k] + (seg, s2) + s.segments[k + 1 :]
    strings = [StringWalk(sid, nodes, segs, s.origin) if t.id == sid else t for t in ss.strings.values()]
    rot = dict(ss.rotation)
    if b in rot:
        rot[b] = tuple(s2 if x == seg else x for x in rot[b])
    outer = {(s2, b) if a_ == (seg, b) else a_ for a_ in ss.outer}
    pinned = set(ss.pinned) | ({pid} if pin else set())
    out = ss._replace(points=points, strings=strings, rotation=rot, outer=outer, pinned=pinned)
    return out, pid, seg, s2


def subdivide_edge(ss: StringSet, e: int, position_label: str | None = None) -> StringSet:
    """Split map edge ``e`` by a fresh pinned node in its middle segment."""
    m = ss.plane_map()
    if e not in m.edges:
        raise UnknownEdge(f"no edge {e}")
    segs = m.edges[e].segments
    seg = segs[len(segs) // 2]
    if position_label is not None and position_label in ss.points:
        raise InvalidInput(f"point id {position_label!r} already exists")
    out, _, _, _ = split_segment(ss, seg, position_label, pin=True)
    return out


def face_corners(ss: StringSet, f: int) -> list[tuple[str, int]]:
    """Every point occurrence on the boundary of face ``f`` in walk order.

    Each corner is ``(point, outgoing segment)``; a new segment inserted right
    after the outgoing segment in the rotation at the point lies in ``f``.
    """
    m = ss.plane_map()
    corners = []
    for d in m.faces[f]:
        for seg, frm in ss.dart_segments(d):
            corners.append((frm, seg))
    return corners


def add_segment(
    ss: StringSet,
    sid: str,
    end: int,
    target: str,
    after_at_end: int | None,
    after_at_target: int | None,
    target_coords: Point | None = None,
) -> tuple[StringSet, int]:
    """Extend string ``sid`` at ``end`` (0 first node, 1 last) by one segment.

    ``target`` may be a fresh point id.  The ``after_*`` arguments give the
    segment after which the new one is inserted counterclockwise at each end
    (ignored where the resulting degree is at most two).
    """
    s = ss.strings[sid]
    a = s.nodes[-1] if end else s.nodes[0]
    new = ss.next_segment
    points = dict(ss.points)
    if target not in points:
        points[target] = PointRef(target, target_coords, ("extension",))
    if end:
        walk = StringWalk(sid, s.nodes + (target,), s.segments + (new,), s.origin)
    else:
        walk = StringWalk(sid, (target,) + s.nodes, (new,) + s.segments, s.origin)
    strings = [walk if t.id == sid else t for t in ss.strings.values()]
    rot = dict(ss.rotation)
    _insert_rotation(ss, rot, a, new, after_at_end, ss.incident.get(a, []) + [new])
    if target in ss.incident:
        _insert_rotation(ss, rot, target, new, after_at_target, ss.incident[target] + [new])
    out = ss._replace(points=points, strings=strings, rotation=rot)
    return out, new


def component_nesting(ss: StringSet) -> dict[int, tuple[int, int] | None]:
    """For every component, the (component, face) it sits inside, or None.

    Uses coordinates; components without coordinates are taken to lie in the
    outer face of everything else.
    """
    m = ss.plane_map()
    comps = ss.component_points()
    rep = {}
    for c, pts in enumerate(comps):
        if ss.has_coordinates(pts):
            rep[c] = ss.points[min(m.components[c], key=vertex_key)].coords
    polys: dict[int, list] = {}
    for f, walk in enumerate(m.faces):
        c = m.component_of[m.origin(walk[0])]
        if m.outer_faces.get(c) == f or c not in rep:
            continue
        polys[f] = [ss.points[p].coords for p in m.face_points(f)]
    inside: dict[int, list[tuple[int, int]]] = {c: [] for c in range(len(comps))}
    for c, q in rep.items():
        for f, poly in polys.items():
            a = m.component_of[m.origin(m.faces[f][0])]
            if a != c and winding_number(q, poly) != 0:
                inside[c].append((a, f))
    depth = {c: len(v) for c, v in inside.items()}
    out: dict[int, tuple[int, int] | None] = {}
    for c, cands in inside.items():
        out[c] = max(cands, key=lambda af: depth[af[0]]) if cands else None
    return out


def add_connector_string(
    ss: StringSet,
    component_a,
    component_b,
    face_a: Anchor | None = None,
    face_b: Anchor | None = None,
    sid: str | None = None,
) -> StringSet:
    """Join two components by a fresh two-node string inside a common face.

    Components may be given as indices or as any point they contain.  Faces
    may be given as anchors; by default they are found from the nesting of the
    components (the outer faces for side-by-side components).  The string
    attaches at the lowest-id point of each face boundary.
    """
    m = ss.plane_map()
    ca = _component_index(ss, component_a)
    cb = _component_index(ss, component_b)
    if ca == cb:
        raise NoSharedFace("both points lie in the same component")
    nested_b = False
    if face_a is None or face_b is None:
        nest = component_nesting(ss)
        na, nb = nest.get(ca), nest.get(cb)
        fa, fb = m.outer_faces[ca], m.outer_faces[cb]
        if nb is not None and nb[0] == ca:
            fa, nested_b = nb[1], True
        elif na is not None and na[0] == cb:
            ca, cb = cb, ca
            fa, fb, nested_b = na[1], m.outer_faces[cb], True
        elif na != nb:
            raise NoSharedFace("the components do not share a face")
    else:
        fa, fb = ss.face_of_anchor(face_a), ss.face_of_anchor(face_b)
        nested_b = fa != m.outer_faces[ca]
        if fb != m.outer_faces[cb]:
            raise NoSharedFace("the second component must be attached through its outer face")
    corner_a = min(face_corners(ss, fa), key=lambda c: vertex_key(c[0]))
    corner_b = min(face_corners(ss, fb), key=lambda c: vertex_key(c[0]))
    pa, after_a = corner_a
    pb, after_b = corner_b
    sid = sid or _fresh_string_id(ss, "conn")
    new = ss.next_segment
    walk = StringWalk(sid, (pa, pb), (new,), sid)
    rot = dict(ss.rotation)
    _insert_rotation(ss, rot, pa, new, after_a, ss.incident[pa] + [new])
    _insert_rotation(ss, rot, pb, new, after_b, ss.incident[pb] + [new])
    outer = set(ss.outer)
    if nested_b:
        comp_of_seg = {}
        for a in ss.outer:
            d = _anchor_dart(ss, m, a)
            comp_of_seg[a] = m.component_of[m.origin(d)]
        outer = {a for a in outer if comp_of_seg[a] != cb}
    out = ss._replace(
        strings=list(ss.strings.values()) + [walk],
        rotation=rot,
        outer=outer,
        connectors=set(ss.connectors) | {sid},
    )
    return normalize_anchors(out)


def _component_index(ss: StringSet, c) -> int:
    m = ss.plane_map()
    if isinstance(c, int):
        return c
    if c in m.component_of:
        return m.component_of[c]
    for i, pts in enumerate(ss.component_points()):
        if c in pts:
            return i
    raise UnknownVertex(f"{c!r} is not a point of the string set")


def _fresh_string_id(ss: StringSet, prefix: str) -> str:
    k = 1
    while f"{prefix}{k}" in ss.strings:
        k += 1
    return f"{prefix}{k}"


def edge_provenance(before: StringSet, after: StringSet) -> dict[int, list[int]]:
    """Map each edge of ``after`` to the edges of ``before`` it absorbed."""
    mb, ma = before.plane_map(), after.plane_map()
    out = {}
    for e in ma.edges.values():
        olds = []
        for seg in e.segments:
            if seg in mb.segment_edge:
                eid = mb.segment_edge[seg][0]
                if eid not in olds:
                    olds.append(eid)
        out[e.id] = olds
    return out
