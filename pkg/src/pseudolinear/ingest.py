"""Geometric and combinatorial input: exact polylines and drawing documents."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import jsonschema

from .errors import (
    InvalidInput,
    OverlapViolation,
    SchemaError,
    SelfCrossViolation,
    TangencyViolation,
)
from .geometry import Point, as_point, fmt_fraction, segment_intersection
from .planegraph import vertex_key
from .stringset import (
    PointRef,
    StringSet,
    StringWalk,
    _component_anchors,
    rotation_from_coordinates,
    validate_general_position,
)

FORMAT = "pseudolinear-drawing"
VERSION = 1


@dataclass(frozen=True)
class Polyline:
    id: str
    points: tuple[Point, ...]

    def __post_init__(self):
        # exact arithmetic throughout: ints and floats become Fractions
        object.__setattr__(self, "points", tuple(as_point(xy) for xy in self.points))
        if len(self.points) < 2:
            raise InvalidInput(f"polyline {self.id!r} needs at least two points")
        for a, b in zip(self.points, self.points[1:]):
            if a == b:
                raise InvalidInput(f"polyline {self.id!r} repeats a point consecutively")


# -- exact polyline intersection -----------------------------------------------


def polylines_to_stringset(polylines: Sequence[Polyline]) -> StringSet:
    """Intersect polylines exactly and build the string set they describe.

    Points are named ``p0, p1, ...`` in lexicographic (x, y) order.

    Raises:
        OverlapViolation: two pieces share a segment of positive length.
        SelfCrossViolation: a polyline meets itself away from its ends.
        TangencyViolation: two polylines touch without crossing.
    """
    ids = [pl.id for pl in polylines]
    if len(set(ids)) != len(ids):
        raise InvalidInput("duplicate polyline id")
    segs = []  # (polyline index, k, a, b)
    for i, pl in enumerate(polylines):
        for k in range(len(pl.points) - 1):
            segs.append((i, k, pl.points[k], pl.points[k + 1]))
    on_seg: list[set[Point]] = [{s[2], s[3]} for s in segs]
    label: dict[Point, set[str]] = {}
    for (i, k, a, b) in segs:
        label.setdefault(a, set()).add(f"{ids[i]}:{k}")
        label.setdefault(b, set()).add(f"{ids[i]}:{k + 1}")
    for x in range(len(segs)):
        i, k, a, b = segs[x]
        for y in range(x + 1, len(segs)):
            j, l, c, d = segs[y]
            hit = segment_intersection(a, b, c, d)
            if hit is None:
                continue
            if isinstance(hit[0], str):
                raise OverlapViolation(
                    f"{ids[i]} and {ids[j]} overlap between {_fmt_pt(hit[1])} and {_fmt_pt(hit[2])}"
                )
            on_seg[x].add(hit)
            on_seg[y].add(hit)
            if hit not in (a, b) or hit not in (c, d):
                label.setdefault(hit, set()).add(f"{ids[i]}x{ids[j]}")
    names = {p: f"p{n}" for n, p in enumerate(sorted(label))}
    points = {
        names[p]: PointRef(names[p], p, tuple(sorted(label[p] - {""}))) for p in label
    }
    strings = []
    counter = 0
    for i, pl in enumerate(polylines):
        nodes: list[Point] = []
        for x, (pi, k, a, b) in enumerate(segs):
            if pi != i:
                continue
            d = (b[0] - a[0], b[1] - a[1])
            ordered = sorted(on_seg[x], key=lambda p: (p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1])
            for p in ordered:
                if not nodes or nodes[-1] != p:
                    nodes.append(p)
        inner = nodes[1:-1]
        if len(set(inner)) != len(inner):
            raise SelfCrossViolation(f"polyline {pl.id!r} crosses itself")
        segids = tuple(range(counter, counter + len(nodes) - 1))
        counter += len(nodes) - 1
        strings.append(StringWalk(pl.id, tuple(names[p] for p in nodes), segids, pl.id))
    ss = StringSet(points, strings, {})
    ends = {seg: ss.segment_ends(seg) for seg in ss.seg_loc}
    ss = ss._replace(rotation=rotation_from_coordinates(ss.points, ss.incident, ends))
    report = validate_general_position(ss)
    for v in report.violations:
        coords = _fmt_pt(ss.points[v.point].coords)
        if v.kind == "self-crossing":
            raise SelfCrossViolation(f"{v.strings[0]} crosses itself at {coords}")
        if v.kind == "tangency":
            raise TangencyViolation(f"{v.strings[0]} and {v.strings[1]} touch at {coords} without crossing")
        raise InvalidInput(str(v))
    return ss._replace(outer=_component_anchors(ss))


def _fmt_pt(p: Point) -> str:
    return f"({fmt_fraction(p[0])}, {fmt_fraction(p[1])})"


# -- documents -----------------------------------------------------------------

_NUMBER = {
    "anyOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"},
    ]
}
_ID = {"type": "string", "minLength": 1}

SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["format", "version", "mode"],
    "properties": {
        "format": {"const": FORMAT},
        "version": {"const": VERSION},
        "mode": {"enum": ["geometric", "combinatorial"]},
        "name": {"type": "string"},
        "graph_vertices": {"type": "array", "items": _ID},
        "polylines": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "points"],
                "additionalProperties": False,
                "properties": {
                    "id": _ID,
                    "points": {
                        "type": "array",
                        "minItems": 2,
                        "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": _NUMBER},
                    },
                },
            },
        },
        "points": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id"],
                "additionalProperties": False,
                "properties": {
                    "id": _ID,
                    "xy": {"type": "array", "minItems": 2, "maxItems": 2, "items": _NUMBER},
                },
            },
        },
        "strings": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "nodes"],
                "additionalProperties": False,
                "properties": {"id": _ID, "nodes": {"type": "array", "minItems": 2, "items": _ID}},
            },
        },
        "rotations": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {
                    "type": "array",
                    "minItems": 2,
                    "maxItems": 2,
                    "prefixItems": [_ID, {"type": "integer", "minimum": 0}],
                },
            },
        },
        "outer": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "array",
                "minItems": 3,
                "maxItems": 3,
                "prefixItems": [_ID, {"type": "integer", "minimum": 0}, _ID],
            },
        },
    },
    "additionalProperties": False,
    "allOf": [
        {
            "if": {"properties": {"mode": {"const": "geometric"}}},
            "then": {
                "required": ["polylines"],
                "not": {"anyOf": [{"required": ["strings"]}, {"required": ["rotations"]}, {"required": ["outer"]}, {"required": ["points"]}]},
            },
        },
        {
            "if": {"properties": {"mode": {"const": "combinatorial"}}},
            "then": {"required": ["points", "strings", "outer"], "not": {"required": ["polylines"]}},
        },
    ],
}


@dataclass
class DrawingDoc:
    """A parsed drawing document.

    Geometric documents carry ``polylines``; combinatorial ones carry
    ``points`` (optional coordinates), ``strings`` (node lists), ``rotations``
    (counterclockwise ``(string, k)`` segment references per point) and
    ``outer`` (directed segments ``(string, k, from_point)`` with the outer
    face on their left, one per component).
    """

    mode: str
    polylines: list[Polyline] = field(default_factory=list)
    points: dict[str, Point | None] = field(default_factory=dict)
    strings: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)
    rotations: dict[str, list[tuple[str, int]]] = field(default_factory=dict)
    outer: list[tuple[str, int, str]] = field(default_factory=list)
    graph_vertices: list[str] | None = None
    name: str | None = None

    def to_stringset(self) -> StringSet:
        if self.mode == "geometric":
            return polylines_to_stringset(self.polylines)
        return _combinatorial_stringset(self)


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def parse_drawing(data: bytes | str) -> DrawingDoc:
    """Parse and validate a drawing document.

    Raises:
        SchemaError: with a JSON-pointer location of the first problem.
    """
    try:
        obj = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SchemaError("", f"not valid JSON: {exc}") from None
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(obj), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = errors[0]
        raise SchemaError(_pointer(err.absolute_path), err.message)
    name = obj.get("name")
    gv = obj.get("graph_vertices")
    if obj["mode"] == "geometric":
        pls = []
        for i, pl in enumerate(obj["polylines"]):
            pts = tuple(as_point(tuple(Fraction(c) for c in xy)) for xy in pl["points"])
            try:
                pls.append(Polyline(pl["id"], pts))
            except InvalidInput as exc:
                raise SchemaError(f"/polylines/{i}", str(exc)) from None
        _unique([p.id for p in pls], "/polylines")
        return DrawingDoc("geometric", polylines=pls, graph_vertices=gv, name=name)
    points: dict[str, Point | None] = {}
    for i, p in enumerate(obj["points"]):
        if p["id"] in points:
            raise SchemaError(f"/points/{i}/id", f"duplicate point id {p['id']!r}")
        points[p["id"]] = as_point([Fraction(c) for c in p["xy"]]) if "xy" in p else None
    strings = []
    for i, s in enumerate(obj["strings"]):
        for j, n in enumerate(s["nodes"]):
            if n not in points:
                raise SchemaError(f"/strings/{i}/nodes/{j}", f"unknown point {n!r}")
        strings.append((s["id"], tuple(s["nodes"])))
    _unique([s[0] for s in strings], "/strings")
    nseg = {sid: len(nodes) - 1 for sid, nodes in strings}
    rotations: dict[str, list[tuple[str, int]]] = {}
    for p, lst in obj.get("rotations", {}).items():
        if p not in points:
            raise SchemaError(f"/rotations/{p}", f"unknown point {p!r}")
        for j, (sid, k) in enumerate(lst):
            if sid not in nseg or k >= nseg[sid]:
                raise SchemaError(f"/rotations/{p}/{j}", f"unknown segment ({sid}, {k})")
        rotations[p] = [(sid, k) for sid, k in lst]
    outer = []
    for j, (sid, k, frm) in enumerate(obj["outer"]):
        if sid not in nseg or k >= nseg[sid]:
            raise SchemaError(f"/outer/{j}", f"unknown segment ({sid}, {k})")
        outer.append((sid, k, frm))
    return DrawingDoc(
        "combinatorial",
        points=points,
        strings=strings,
        rotations=rotations,
        outer=outer,
        graph_vertices=gv,
        name=name,
    )


def _unique(ids: list[str], where: str) -> None:
    seen = set()
    for i, x in enumerate(ids):
        if x in seen:
            raise SchemaError(f"{where}/{i}/id", f"duplicate id {x!r}")
        seen.add(x)


def doc_to_json(doc: DrawingDoc) -> dict:
    obj: dict[str, Any] = {"format": FORMAT, "version": VERSION, "mode": doc.mode}
    if doc.name is not None:
        obj["name"] = doc.name
    if doc.graph_vertices is not None:
        obj["graph_vertices"] = list(doc.graph_vertices)
    if doc.mode == "geometric":
        obj["polylines"] = [
            {"id": pl.id, "points": [[fmt_fraction(x), fmt_fraction(y)] for x, y in pl.points]}
            for pl in doc.polylines
        ]
        return obj
    pts = []
    for pid, c in doc.points.items():
        entry: dict[str, Any] = {"id": pid}
        if c is not None:
            entry["xy"] = [fmt_fraction(c[0]), fmt_fraction(c[1])]
        pts.append(entry)
    obj["points"] = pts
    obj["strings"] = [{"id": sid, "nodes": list(nodes)} for sid, nodes in doc.strings]
    obj["rotations"] = {p: [[sid, k] for sid, k in lst] for p, lst in doc.rotations.items()}
    obj["outer"] = [[sid, k, frm] for sid, k, frm in doc.outer]
    return obj


def dumps(obj: Any) -> bytes:
    """Canonical JSON bytes: sorted keys, two-space indent, trailing newline."""
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode()


def serialize_drawing(doc: DrawingDoc) -> bytes:
    return dumps(doc_to_json(doc))


def _combinatorial_stringset(doc: DrawingDoc) -> StringSet:
    seg_id: dict[tuple[str, int], int] = {}
    strings = []
    counter = 0
    for sid, nodes in doc.strings:
        segs = []
        for k in range(len(nodes) - 1):
            seg_id[(sid, k)] = counter
            segs.append(counter)
            counter += 1
        strings.append(StringWalk(sid, nodes, tuple(segs), sid))
    points = {pid: PointRef(pid, c, (pid,)) for pid, c in doc.points.items()}
    rot = {p: tuple(seg_id[r] for r in lst) for p, lst in doc.rotations.items()}
    outer = [(seg_id[(sid, k)], frm) for sid, k, frm in doc.outer]
    used = {p for _, nodes in doc.strings for p in nodes}
    ss = StringSet({p: points[p] for p in points if p in used}, strings, rot, outer)
    report = validate_general_position(ss)
    if not report.ok:
        raise InvalidInput("; ".join(str(v) for v in report.violations))
    ss.plane_map()
    return ss


def stringset_to_doc(ss: StringSet, with_coords: bool = True, graph_vertices=None, name=None) -> DrawingDoc:
    """Combinatorial document describing ``ss`` (segments as (string, k))."""
    ref = {seg: (sid, k) for seg, (sid, k) in ss.seg_loc.items()}
    used = sorted(ss.incident, key=vertex_key)
    points = {p: (ss.points[p].coords if with_coords else None) for p in used}
    rotations = {p: [ref[s] for s in ss.rotation[p]] for p in sorted(ss.rotation, key=vertex_key) if ss.degree(p) >= 3}
    outer = sorted(ref[seg] + (frm,) for seg, frm in ss.outer)
    return DrawingDoc(
        "combinatorial",
        points=points,
        strings=[(s.id, s.nodes) for s in ss.strings.values()],
        rotations=rotations,
        outer=outer,
        graph_vertices=graph_vertices,
        name=name,
    )


def load_drawing(path) -> DrawingDoc:
    with open(path, "rb") as fh:
        return parse_drawing(fh.read())
