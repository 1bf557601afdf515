"""Rainbow classification, obstructions, and the three search algorithms.

The searches run on ``_Work``, a mutable copy of G(Σ) that supports the
removal Σ − x directly on the map.  Same-string degree-2 vertices left behind
by a removal are not suppressed: such a vertex is reflecting in every cycle
and never an outer-rainbow, so obstruction status and the cycles themselves
are unchanged, and every working edge stays an edge of the original map.
That makes lifting a found cycle back to the input trivial.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InternalInconsistency, InvalidInput, VertexNotOnCycle
from .planegraph import (
    Block,
    CycleRef,
    Dart,
    PlaneMap,
    _blocks,
    cycle_interior,
    rotation_inside,
    vertex_key,
)


def _as_map(obj) -> PlaneMap:
    return obj if isinstance(obj, PlaneMap) else obj.plane_map()


# -- classification ------------------------------------------------------------


@dataclass(frozen=True)
class VertexClass:
    kind: str  # "rainbow" | "reflecting"
    witness: str | None = None

    @property
    def rainbow(self) -> bool:
        return self.kind == "rainbow"


def classify_vertex(sigma, c: CycleRef, v) -> VertexClass:
    m = _as_map(sigma)
    if v not in c.out_dart:
        raise VertexNotOnCycle(f"{v!r} is not on the cycle")
    seen: set[str] = set()
    for d in rotation_inside(m, c, v):
        s = m.string(d)
        if s in seen:
            return VertexClass("reflecting", s)
        seen.add(s)
    return VertexClass("rainbow")


def delta_set(sigma, c: CycleRef) -> list:
    m = _as_map(sigma)
    return [v for v in c.vertices if m.string(c.out_dart[v]) != m.string(c.in_dart[v])]


def rainbows(sigma, c: CycleRef) -> list:
    m = _as_map(sigma)
    return [v for v in c.vertices if classify_vertex(m, c, v).rainbow]


def is_obstruction(sigma, c: CycleRef) -> tuple[bool, list]:
    rb = rainbows(sigma, c)
    return len(rb) <= 2, rb


def outer_rainbows(sigma) -> list:
    m = _as_map(sigma)
    out = []
    for v in m.outer_vertices():
        strings = [m.string(d) for d in m.rotation[v]]
        if len(set(strings)) == len(strings):
            out.append(v)
    return out


@dataclass
class ObstructionReport:
    cycle: CycleRef
    rainbows: list
    delta: list
    trace: list[str] = field(default_factory=list)
    points: list = field(default_factory=list)
    segments: frozenset = frozenset()

    def to_json(self) -> dict:
        return {
            "cycle": list(self.cycle.vertices),
            "curve": list(self.points),
            "rainbows": list(self.rainbows),
            "delta": list(self.delta),
            "trace": list(self.trace),
        }


def make_report(m: PlaneMap, darts: Sequence[Dart], trace: list[str] | None = None) -> ObstructionReport:
    c = cycle_interior(m, list(darts))
    pts = []
    segs = set()
    for d in c.darts:
        pts.extend(m.dart_points(d)[:-1])
        segs.update(m.edges[d.edge].segments)
    return ObstructionReport(c, rainbows(m, c), delta_set(m, c), list(trace or []), pts, frozenset(segs))


# -- working graph --------------------------------------------------------------


class _Work:
    """Mutable plane graph over the darts of an original map."""

    def __init__(self, m: PlaneMap, _copy: "_Work | None" = None):
        self.m = m
        if _copy is not None:
            self.rot = {v: list(ds) for v, ds in _copy.rot.items()}
            self.marks = set(_copy.marks)
            self.trace = _copy.trace
            self._strings = _copy._strings
        else:
            self.rot = {v: list(ds) for v, ds in m.rotation.items() if ds}
            self.marks = {d for f in m.outer_faces.values() for d in m.faces[f]}
            self.trace: list[str] = []
            by_string: dict[str, list] = {}
            for e in m.edges.values():
                by_string.setdefault(e.string, []).append(e)
            self._strings = {s: sorted(es, key=lambda e: e.index) for s, es in by_string.items()}
        self._d = None

    def copy(self) -> "_Work":
        return _Work(self.m, self)

    # derived data, rebuilt lazily after each mutation
    def _derive(self):
        if self._d is not None:
            return self._d
        m = self.m
        pred = {}
        for v, ds in self.rot.items():
            n = len(ds)
            for i, d in enumerate(ds):
                pred[d] = ds[i - 1]
        face_of: dict[Dart, int] = {}
        faces: list[list[Dart]] = []
        for v in sorted(self.rot, key=vertex_key):
            for d0 in self.rot[v]:
                if d0 in face_of:
                    continue
                f = len(faces)
                walk = []
                d = d0
                while d not in face_of:
                    face_of[d] = f
                    walk.append(d)
                    d = pred[d.twin]
                faces.append(walk)
        comp: dict = {}
        order = sorted(self.rot, key=vertex_key)
        for v in order:
            if v in comp:
                continue
            comp[v] = v
            stack = [v]
            while stack:
                u = stack.pop()
                for d in self.rot[u]:
                    w = m.head(d)
                    if w not in comp:
                        comp[w] = v
                        stack.append(w)
        outer: dict = {}
        for d in self.marks:
            c = comp[m.origin(d)]
            f = face_of[d]
            if outer.setdefault(c, f) != f:
                raise InternalInconsistency("outer-face marks disagree")
        alive = {d.edge for ds in self.rot.values() for d in ds}
        label: dict[int, tuple] = {}
        for s, es in self._strings.items():
            run = None
            prev = None
            for e in es:
                if e.id not in alive:
                    run = None
                    prev = None
                    continue
                if run is None or prev != e.index - 1:
                    run = (s, e.index)
                label[e.id] = run
                prev = e.index
        self._d = (pred, face_of, faces, comp, outer, alive, label)
        return self._d

    @property
    def face_of(self):
        return self._derive()[1]

    @property
    def faces(self):
        return self._derive()[2]

    @property
    def comp(self):
        return self._derive()[3]

    def outer_face(self, v) -> int:
        d = self._derive()
        return d[4][d[3][v]]

    def label(self, dart: Dart):
        return self._derive()[6][dart.edge]

    def vertices(self) -> list:
        return sorted(self.rot, key=vertex_key)

    def rainbow_full(self, v) -> bool:
        labels = [self.label(d) for d in self.rot[v]]
        return len(set(labels)) == len(labels)

    def remove(self, vs: Iterable, why: str = "") -> None:
        vs = set(vs)
        if not vs:
            return
        pred, face_of, faces, *_ = self._derive()
        for v in vs:
            for d in self.rot[v]:
                self.marks.update(faces[face_of[d]])
        dead = {d.edge for v in vs for d in self.rot[v]}
        for v in vs:
            del self.rot[v]
        for v in list(self.rot):
            ds = [d for d in self.rot[v] if d.edge not in dead]
            if ds:
                self.rot[v] = ds
            else:
                del self.rot[v]
        self.marks = {d for d in self.marks if d.edge not in dead}
        self._d = None
        if why:
            self.trace.append(f"{why}: remove {_fmt(sorted(vs, key=vertex_key))}")

    def keep_component(self, v) -> None:
        comp = self.comp
        c = comp[v]
        drop = [u for u in self.rot if comp[u] != c]
        for u in drop:
            del self.rot[u]
        self.marks = {d for d in self.marks if self.m.origin(d) in self.rot}
        self._d = None

    def blocks(self) -> list[Block]:
        alive = self._derive()[5]
        return [b for b in _blocks(list(self.rot), [self.m.edges[e] for e in alive]) if not b.is_bridge]

    def block_cycle(self, b: Block) -> list[Dart]:
        """Boundary of the outer face of block ``b``, disk on the left."""
        m = self.m
        v0 = next(iter(b.vertices))
        walls = set(b.edges)
        outside = self._reach(self.outer_face(v0), walls)
        face_of = self.face_of
        sub = {Dart(e, r) for e in b.edges for r in (0, 1)}
        start = min(d for d in sub if face_of[d] in outside)
        pred = self._derive()[0]

        def sub_prev(d):
            x = pred[d]
            while x not in sub:
                x = pred[x]
            return x

        walk = [start]
        d = sub_prev(start.twin)
        while d != start:
            walk.append(d)
            d = sub_prev(d.twin)
        return [x.twin for x in reversed(walk)]

    def _reach(self, start: int, walls: set[int]) -> set[int]:
        faces, face_of = self.faces, self.face_of
        seen = {start}
        q = deque([start])
        while q:
            f = q.popleft()
            for d in faces[f]:
                if d.edge in walls:
                    continue
                g = face_of[d.twin]
                if g not in seen:
                    seen.add(g)
                    q.append(g)
        return seen

    def exterior(self, cyc: list[Dart]) -> set:
        m = self.m
        on = {m.origin(d) for d in cyc}
        outside = self._reach(self.outer_face(m.origin(cyc[0])), {d.edge for d in cyc})
        c = self.comp[m.origin(cyc[0])]
        face_of = self.face_of
        comp = self.comp
        return {
            v
            for v, ds in self.rot.items()
            if v not in on and comp[v] == c and any(face_of[d] in outside for d in ds)
        }

    def outer_cycles(self, through=None) -> list[list[Dart]]:
        """Outer boundaries of blocks whose edges lie on the outer face."""
        out = []
        face_of = self.face_of
        for b in self.blocks():
            if through is not None and through not in b.vertices:
                continue
            v0 = next(iter(b.vertices))
            f = self.outer_face(v0)
            if any(face_of[Dart(e, r)] == f for e in b.edges for r in (0, 1)):
                out.append(self.block_cycle(b))
        return out

    def cycle_vertices(self, cyc: list[Dart]) -> list:
        return [self.m.origin(d) for d in cyc]

    def peel_to(self, cyc: list[Dart], why: str) -> None:
        self.remove(self.exterior(cyc), why)


def _fmt(vs) -> str:
    return "[" + ", ".join(str(v) for v in vs) + "]"


# -- search through two outer-rainbows (trace prefix alg1) -----------------------


def _alg1(w: _Work, x, y) -> list[Dart] | None:
    while True:
        common = [b for b in w.blocks() if x in b.vertices and y in b.vertices]
        if not common:
            w.trace.append(f"alg1({x}, {y}): no cycle through both")
            return None
        cyc = w.block_cycle(common[0])
        w.peel_to(cyc, f"alg1({x}, {y}): peel outside {_fmt(w.cycle_vertices(cyc))}")
        zs = [v for v in w.cycle_vertices(cyc) if v not in (x, y) and w.rainbow_full(v)]
        if not zs:
            w.trace.append(f"alg1({x}, {y}): return {_fmt(w.cycle_vertices(cyc))}")
            return cyc
        z = min(zs, key=vertex_key)
        w.remove({z}, f"alg1({x}, {y}): rainbow {z}")


# -- search through one outer-rainbow (trace prefix alg2) ------------------------


def _alg2(w: _Work, x) -> list[Dart] | None:
    cycles = w.outer_cycles(through=x)
    if not cycles:
        w.trace.append(f"alg2({x}): no cycle through {x}")
    for cyc in cycles:
        d = w.copy()
        d.peel_to(cyc, f"alg2({x}): peel outside {_fmt(d.cycle_vertices(cyc))}")
        r = _alg2_disk(d, x, cyc)
        if r is not None:
            return r
    return None


def _alg2_disk(w: _Work, x, cyc: list[Dart]) -> list[Dart] | None:
    ys = [v for v in w.cycle_vertices(cyc) if v != x and w.rainbow_full(v)]
    if not ys:
        w.trace.append(f"alg2({x}): return {_fmt(w.cycle_vertices(cyc))}")
        return cyc
    y = min(ys, key=vertex_key)
    w.trace.append(f"alg2({x}): try outer-rainbow {y}")
    r = _alg1(w.copy(), x, y)
    if r is not None:
        return r
    w.remove({y}, f"alg2({x}): no obstruction through {y}")
    w.keep_component(x)
    return _alg2(w, x)


# -- full search (trace prefix alg3) ---------------------------------------------


def _solve(w: _Work) -> list[Dart] | None:
    cycles = w.outer_cycles()
    if not cycles:
        w.trace.append("alg3: no cycle")
    for cyc in cycles:
        d = w.copy()
        d.peel_to(cyc, f"alg3: peel outside {_fmt(d.cycle_vertices(cyc))}")
        d.keep_component(d.m.origin(cyc[0]))
        r = _solve_disk(d, cyc)
        if r is not None:
            return r
    return None


def _solve_disk(w: _Work, cyc: list[Dart]) -> list[Dart] | None:
    rb = [v for v in w.cycle_vertices(cyc) if w.rainbow_full(v)]
    if not rb:
        w.trace.append(f"alg3: return {_fmt(w.cycle_vertices(cyc))} (no rainbows)")
        return cyc
    x = min(rb, key=vertex_key)
    w.trace.append(f"alg3: outer-rainbow {x}")
    r = _alg2(w.copy(), x)
    if r is not None:
        return r
    w.remove({x}, f"alg3: no obstruction through {x}")
    return _solve(w)


# -- public entry points -------------------------------------------------------------


def _finish(m: PlaneMap, cyc: list[Dart] | None, trace: list[str], cap: int) -> ObstructionReport | None:
    if cyc is None:
        return None
    rep = make_report(m, cyc, trace)
    if len(rep.rainbows) <= 2:
        return rep
    if len(m.vertices) <= cap:
        from .oracle import brute_force_obstruction

        rep2 = brute_force_obstruction(m, vertex_cap=cap)
        if rep2 is not None:
            rep2.trace = trace + ["verification failed; oracle fallback"]
        return rep2
    raise InternalInconsistency(
        f"returned cycle {rep.cycle.vertices} has {len(rep.rainbows)} rainbows"
    )


def _require_outer_rainbow(m: PlaneMap, v) -> None:
    if v not in outer_rainbows(m):
        raise InvalidInput(f"{v!r} is not an outer-rainbow")


def find_obstruction_xy(sigma, x, y, *, cap: int = 16) -> ObstructionReport | None:
    """An obstruction through both outer-rainbows x and y, or None."""
    m = _as_map(sigma)
    _require_outer_rainbow(m, x)
    _require_outer_rainbow(m, y)
    w = _Work(m)
    return _finish(m, _alg1(w, x, y), w.trace, cap)


def find_obstruction_x(sigma, x, *, cap: int = 16) -> ObstructionReport | None:
    """An obstruction through the outer-rainbow x, or None."""
    m = _as_map(sigma)
    _require_outer_rainbow(m, x)
    w = _Work(m)
    return _finish(m, _alg2(w, x), w.trace, cap)


def find_obstruction(sigma, *, cap: int = 16) -> ObstructionReport | None:
    """Some obstruction of Σ, or None if Σ is pseudolinear."""
    m = _as_map(sigma)
    w = _Work(m)
    return _finish(m, _solve(w), w.trace, cap)
