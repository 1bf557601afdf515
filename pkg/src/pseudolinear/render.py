"""Deterministic SVG pictures of string sets, obstructions and arrangements."""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .planegraph import vertex_key
from .stringset import StringSet

PALETTE = ["#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#ff7f0e"]


@dataclass
class RenderOptions:
    width: int = 480
    height: int = 480
    margin: int = 40
    labels: bool = False
    iterations: int = 400


def _coordinates(ss: StringSet) -> dict[str, tuple[float, float]]:
    return {p: (float(ss.points[p].coords[0]), float(ss.points[p].coords[1])) for p in ss.incident}


def barycentric_layout(ss: StringSet, iterations: int = 400) -> dict[str, tuple[float, float]]:
    """Positions from the combinatorial structure alone.

    The degree-1 points of each component's outer walk go on a circle in walk
    order (all outer points when there are fewer than three); every other
    point moves to the average of its neighbours.  Components sit side by
    side.
    """
    m = ss.plane_map()
    nbrs: dict[str, set[str]] = {p: set() for p in ss.incident}
    for seg in ss.seg_loc:
        a, b = ss.segment_ends(seg)
        nbrs[a].add(b)
        nbrs[b].add(a)
    comps = ss.component_points()
    pos: dict[str, tuple[float, float]] = {}
    fixed: set[str] = set()
    for c, pts in enumerate(comps):
        walk = []
        for d in m.faces[m.outer_faces[c]]:
            for q in m.dart_points(d)[:-1]:
                if q not in walk:
                    walk.append(q)
        pins = [q for q in walk if ss.degree(q) == 1]
        if len(pins) < 3:
            pins = walk
        cx = 3.0 * c
        n = len(pins)
        for i, q in enumerate(pins):
            t = 2 * math.pi * i / n
            # the outer walk runs clockwise
            pos[q] = (cx + math.cos(-t), math.sin(-t))
            fixed.add(q)
        for q in sorted(pts, key=vertex_key):
            pos.setdefault(q, (cx, 0.0))
    order = sorted((p for p in pos if p not in fixed), key=vertex_key)
    for _ in range(iterations):
        for p in order:
            ns = nbrs[p]
            if ns:
                pos[p] = (sum(pos[q][0] for q in ns) / len(ns), sum(pos[q][1] for q in ns) / len(ns))
    return pos


class _Canvas:
    def __init__(self, pos: dict[str, tuple[float, float]], opt: RenderOptions):
        xs = [p[0] for p in pos.values()] or [0.0]
        ys = [p[1] for p in pos.values()] or [0.0]
        self.x0, self.y0 = min(xs), min(ys)
        span = max(max(xs) - self.x0, max(ys) - self.y0) or 1.0
        self.scale = (min(opt.width, opt.height) - 2 * opt.margin) / span
        self.opt = opt
        self.pos = pos
        self.items: list[str] = []

    def xy(self, p) -> tuple[float, float]:
        x, y = self.pos[p] if isinstance(p, str) else p
        return (
            self.opt.margin + (x - self.x0) * self.scale,
            self.opt.height - self.opt.margin - (y - self.y0) * self.scale,
        )

    def polyline(self, pts, color: str, width: float, extra: str = "") -> None:
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in (self.xy(p) for p in pts))
        self.items.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="{width}"{extra}/>'
        )

    def circle(self, p, r: float, color: str) -> None:
        x, y = self.xy(p)
        self.items.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r}" fill="{color}"/>')

    def text(self, p, s: str) -> None:
        x, y = self.xy(p)
        self.items.append(f'<text x="{x + 4:.2f}" y="{y - 4:.2f}" font-size="10">{escape(s)}</text>')

    def svg(self, title: str) -> bytes:
        o = self.opt
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{o.width}" height="{o.height}" '
            f'viewBox="0 0 {o.width} {o.height}">\n'
            f"<title>{escape(title)}</title>\n"
            f'<rect x="0" y="0" width="{o.width}" height="{o.height}" fill="white"/>\n'
        )
        return (head + "\n".join(self.items) + "\n</svg>\n").encode()


def _draw_strings(cv: _Canvas, ss: StringSet, skip=frozenset()) -> None:
    for i, sid in enumerate(sorted(ss.strings, key=vertex_key)):
        if sid in skip:
            continue
        cv.polyline(ss.strings[sid].nodes, PALETTE[i % len(PALETTE)], 2)


def _draw_points(cv: _Canvas, ss: StringSet, labels: bool, skip=frozenset()) -> None:
    used = {p for s in ss.strings.values() if s.id not in skip for p in s.nodes}
    vs = ss.vertex_set()
    for p in sorted(used, key=vertex_key):
        if p in vs:
            cv.circle(p, 3, "black")
        if labels:
            cv.text(p, p)


def render_svg(ss: StringSet, highlight=None, options: RenderOptions | None = None, title: str = "strings") -> bytes:
    """Picture of ``ss``; ``highlight`` is an obstruction report drawn in red."""
    opt = options or RenderOptions()
    pos = _coordinates(ss) if ss.has_coordinates() else barycentric_layout(ss, opt.iterations)
    cv = _Canvas(pos, opt)
    if highlight is not None:
        m = ss.plane_map()
        pts = []
        for d in highlight.cycle.darts:
            pts.extend(m.dart_points(d)[:-1])
        pts.append(pts[0])
        cv.polyline(pts, "#d62728", 7, ' stroke-opacity="0.45" stroke-linejoin="round"')
    _draw_strings(cv, ss)
    _draw_points(cv, ss, opt.labels)
    return cv.svg(title)


def render_arrangement_svg(arr, options: RenderOptions | None = None, title: str = "arrangement") -> bytes:
    """Picture of a pseudoline arrangement; every end is continued by a ray."""
    opt = options or RenderOptions()
    ss = arr.strings
    pos = barycentric_layout(ss, opt.iterations)
    skip = frozenset(arr.connectors)
    # rays leave the unit circle radially and stop at the viewport edge
    ray_tip = {}
    for sid, ends in arr.ray_ends.items():
        for p in ends:
            x, y = pos[p]
            r = math.hypot(x, y) or 1.0
            ray_tip[p] = (x / r * 1.6, y / r * 1.6)
    allpos = dict(pos)
    for p, q in ray_tip.items():
        allpos[f"ray:{p}"] = q
    cv = _Canvas(allpos, opt)
    for i, sid in enumerate(sorted(ss.strings, key=vertex_key)):
        if sid in skip:
            continue
        color = PALETTE[i % len(PALETTE)]
        nodes = ss.strings[sid].nodes
        pts = [ray_tip[nodes[0]], *nodes, ray_tip[nodes[-1]]]
        cv.polyline(pts, color, 2)
    orig = {p for s in arr.original.strings.values() for p in s.nodes}
    for p in sorted(orig & set(pos), key=vertex_key):
        cv.circle(p, 2.5, "black")
    if opt.labels:
        for sid, nodes in sorted(arr.ray_ends.items()):
            cv.text(ray_tip[nodes[0]], sid)
    return cv.svg(title)
