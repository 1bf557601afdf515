"""Minimal forbidden subconfigurations of non-pseudolinear good drawings.

Take an obstruction C with the fewest string changes |δ(C)|.  Cut it at the
points of δ(C) into paths P_0..P_m, each on a single edge-arc.  At a
reflecting junction the two arcs cross, and both paths are extended a little
past the crossing along their arcs (into the disk of C).  A rainbow junction
is left as it is and shows up as a dot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InternalInconsistency, NoObstruction
from .geometry import fmt_fraction
from .ingest import DrawingDoc, Polyline
from .kn import GoodDrawing, validate_good_drawing
from .obstruction import ObstructionReport, is_obstruction
from .oracle import brute_force_obstruction
from .planegraph import CycleRef, cycle_from_edges, cycle_interior, rotation_inside
from .stringset import StringSet, from_walks


@dataclass(frozen=True)
class Junction:
    """Where the paths of two consecutive strings meet.

    Attributes:
        point: The point of δ(C).
        kind: "dot" (a rainbow of C) or "crossing" (reflecting; both arcs
            cross there and are extended into the disk).
        strings: Ids of the configuration strings before and after it.
    """

    point: str
    kind: str
    strings: tuple[str, str]


@dataclass
class ConfigString:
    id: str
    source: str
    nodes: tuple[str, ...]
    segments: tuple[int, ...]
    extended: tuple[bool, bool]


@dataclass
class ForbiddenConfig:
    """A member of the forbidden family, as pieces of the input drawing.

    Attributes:
        strings: The extended paths, listed along C counterclockwise; each
            runs counterclockwise along C.
        junctions: ``junctions[i]`` joins ``strings[i - 1]`` to ``strings[i]``.
        rainbows: Number of dots.
        points: Coordinates of every point used (``None`` where unknown).
        obstruction: The obstruction of the input it was cut from.
        sigma: The input string set.
    """

    strings: list[ConfigString]
    junctions: list[Junction]
    rainbows: int
    points: dict[str, tuple | None]
    obstruction: ObstructionReport
    sigma: StringSet = field(repr=False)

    def to_json(self) -> dict:
        def pt(p):
            c = self.points[p]
            return None if c is None else [fmt_fraction(c[0]), fmt_fraction(c[1])]

        r, m = classify_config(self)
        return {
            "class": {"rainbows": r, "strings": m},
            "strings": [
                {"id": s.id, "source": s.source, "nodes": list(s.nodes), "extended": list(s.extended)}
                for s in self.strings
            ],
            "junctions": [{"point": j.point, "kind": j.kind, "strings": list(j.strings)} for j in self.junctions],
            "points": {p: pt(p) for p in sorted(self.points)},
            "cycle": list(self.obstruction.cycle.vertices),
        }

    def standalone(self) -> StringSet:
        """The configuration on its own, with the rotations of the input."""
        walks = [(s.id, s.nodes) for s in self.strings]
        where = {}
        for s in self.strings:
            for k, seg in enumerate(s.segments):
                where[seg] = (s.id, k)
        incident: dict[str, list[int]] = {}
        for s in self.strings:
            for k, seg in enumerate(s.segments):
                incident.setdefault(s.nodes[k], []).append(seg)
                incident.setdefault(s.nodes[k + 1], []).append(seg)
        rotation = {}
        for p, segs in incident.items():
            if len(segs) >= 3:
                rotation[p] = [where[seg] for seg in self.sigma.rotation_at(p) if seg in where]
        first = self.strings[0]
        k = 1 if first.extended[0] else 0
        # reversed, the first cycle segment has the exterior of C on its left
        outer = [(first.id, k, first.nodes[k + 1])]
        coords = None
        if all(c is not None for c in self.points.values()):
            coords = dict(self.points)
        ss = from_walks(walks, rotation, outer)
        if coords:
            ss = ss._replace(points={p: type(ref)(p, coords[p], ref.provenance) for p, ref in ss.points.items()})
        return ss

    def to_doc(self) -> DrawingDoc:
        """Geometric document of the configuration (needs coordinates)."""
        pls = [Polyline(s.id, tuple(self.points[p] for p in s.nodes)) for s in self.strings]
        return DrawingDoc("geometric", polylines=pls, name="forbidden-configuration")


def defining_cycle(ss: StringSet) -> CycleRef:
    """The cycle of a configuration: every edge not ending at a degree-1 point."""
    m = ss.plane_map()
    eids = [e.id for e in m.edges.values() if ss.degree(e.tail) > 1 and ss.degree(e.head) > 1]
    return cycle_interior(m, cycle_from_edges(m, eids))


def classify_config(cfg: ForbiddenConfig) -> tuple[int, int]:
    """(number of dots, number of strings)."""
    return cfg.rainbows, len(cfg.strings)


def _runs(ss: StringSet, rep: ObstructionReport) -> list[tuple[str, list[int], list[str]]]:
    """Cut C into single-string runs: (string, segments, points) counterclockwise."""
    m = ss.plane_map()
    darts = list(rep.cycle.darts)
    strings = [m.edges[d.edge].string for d in darts]
    n = len(darts)
    start = next((i for i in range(n) if strings[i] != strings[i - 1]), None)
    if start is None:
        raise InternalInconsistency("obstruction lies on a single string")
    darts = darts[start:] + darts[:start]
    runs = []
    for d in darts:
        sid = m.edges[d.edge].string
        segs = [seg for seg, _ in ss.dart_segments(d)]
        pts = list(m.dart_points(d))
        if runs and runs[-1][0] == sid:
            runs[-1][1].extend(segs)
            runs[-1][2].extend(pts[1:])
        else:
            runs.append((sid, segs, pts))
    return runs


def extract_forbidden(drawing, vertex_cap: int = 16) -> ForbiddenConfig:
    """Cut the forbidden configuration out of a non-pseudolinear good drawing.

    Args:
        drawing: A GoodDrawing or a StringSet (validated as a good drawing).
        vertex_cap: Limit for the exhaustive search of a |δ|-minimal
            obstruction.

    Raises:
        NotGood: the drawing is not good.
        CapExceeded: the map is larger than ``vertex_cap``.
        NoObstruction: the drawing is pseudolinear.
    """
    gd = drawing if isinstance(drawing, GoodDrawing) else validate_good_drawing(drawing)
    ss = gd.sigma
    rep = brute_force_obstruction(ss, vertex_cap=vertex_cap, minimize_delta=True)
    if rep is None:
        raise NoObstruction("the drawing is pseudolinear")
    m = ss.plane_map()
    rainbow = set(rep.rainbows)
    runs = _runs(ss, rep)
    sources = [r[0] for r in runs]
    if len(set(sources)) != len(sources):
        raise InternalInconsistency("two paths of a minimal obstruction lie on the same arc")
    inside = {}
    for sid, _, pts in runs:
        inside[pts[0]] = set(rotation_inside(m, rep.cycle, pts[0]))
    points = {}
    strings = []
    used_ids: set[str] = set()
    for i, (sid, segs, pts) in enumerate(runs):
        walk = ss.strings[sid]
        nodes = list(pts)
        segs = list(segs)
        ext = [False, False]
        for side in (0, 1):
            x = pts[0] if side == 0 else pts[-1]
            if x in rainbow:
                continue
            # step along the arc away from the path
            j = walk.nodes.index(x)
            nb = pts[1] if side == 0 else pts[-2]
            k = j - 1 if j + 1 < len(walk.nodes) and walk.nodes[j + 1] == nb else j + 1
            if not (0 <= k < len(walk.nodes)):
                raise InternalInconsistency(f"reflecting junction {x} is an end of {sid}")
            seg = walk.segments[min(j, k)]
            y = walk.nodes[k]
            _check_tail(ss, m, rep.cycle, inside, x, seg)
            tip = f"{x}~{sid}"
            cx, cy = ss.points[x].coords, ss.points[y].coords
            points[tip] = None if cx is None or cy is None else (
                Fraction(cx[0] + cy[0], 2),
                Fraction(cx[1] + cy[1], 2),
            )
            if side == 0:
                nodes.insert(0, tip)
                segs.insert(0, seg)
            else:
                nodes.append(tip)
                segs.append(seg)
            ext[side] = True
        for p in nodes:
            if p not in points:
                points[p] = ss.points[p].coords
        cid = sid
        while cid in used_ids:
            cid += "'"
        used_ids.add(cid)
        strings.append(ConfigString(cid, sid, tuple(nodes), tuple(segs), (ext[0], ext[1])))
    junctions = []
    for i, s in enumerate(strings):
        x = runs[i][2][0]
        kind = "dot" if x in rainbow else "crossing"
        junctions.append(Junction(x, kind, (strings[i - 1].id, s.id)))
    n_dots = sum(1 for j in junctions if j.kind == "dot")
    return ForbiddenConfig(strings, junctions, n_dots, points, rep, ss)


def _check_tail(ss: StringSet, m, cycle: CycleRef, inside, x: str, seg: int) -> None:
    eid, _ = m.segment_edge[seg]
    darts = {d for d in m.rotation[x] if d.edge == eid}
    if not darts & inside[x]:
        raise InternalInconsistency(f"the arc added at {x} leaves the disk of the obstruction")


def verify_standalone(cfg: ForbiddenConfig) -> tuple[bool, list]:
    """Re-ingest the configuration alone and test its defining cycle."""
    ss = cfg.standalone()
    return is_obstruction(ss, defining_cycle(ss))
