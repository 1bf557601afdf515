"""Combinatorial plane maps: darts, rotations, faces, blocks and cycle sides.

Conventions (fixed once, used everywhere):

* A dart is an edge together with a direction.  ``Dart(e, 0)`` runs from the
  edge's first point to its last point, ``Dart(e, 1)`` the other way.
* ``rotation[v]`` lists the darts leaving ``v`` in counterclockwise order.
* Faces are traced with ``next(d) = ccw_prev(twin(d))`` taken at the head of
  ``d``.  With this rule every face lies to the *left* of its darts, so the
  walk of a bounded face is counterclockwise and the walk of the outer face
  is clockwise.
* A ``CycleRef`` stores its darts oriented so the closed disk is on the left.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    DanglingDart,
    MissingOuterFace,
    NonPlanarEmbedding,
    NotACycle,
    VertexNotOnCycle,
)

Vertex = Hashable


class Dart(NamedTuple):
    edge: int
    rev: int

    @property
    def twin(self) -> "Dart":
        return Dart(self.edge, 1 - self.rev)


@dataclass(frozen=True)
class Edge:
    """A map edge: a maximal piece of one string between two vertices.

    Attributes:
        id: Edge identifier (the id of its first segment).
        string: Identifier of the owning string.
        points: Point ids from tail to head, including bend points.
        segments: Segment ids along the edge, ``len(points) - 1`` of them.
        index: Position of the edge along its string, counted from the
            string's first node.
    """

    id: int
    string: str
    points: tuple
    segments: tuple = ()
    index: int = 0

    @property
    def tail(self):
        return self.points[0]

    @property
    def head(self):
        return self.points[-1]


class PlaneMap:
    """An immutable plane map with traced faces and one outer face per component."""

    def __init__(
        self,
        edges: Mapping[int, Edge],
        rotation: Mapping[Vertex, Sequence[Dart]],
        outer_hint: Iterable[Dart],
    ):
        self.edges: dict[int, Edge] = dict(edges)
        self.rotation: dict[Vertex, tuple[Dart, ...]] = {
            v: tuple(ds) for v, ds in rotation.items()
        }
        self.vertices: tuple = tuple(sorted(self.rotation, key=_vkey))
        self._pos: dict[Dart, int] = {}
        self._check_rotation()
        self.faces: list[tuple[Dart, ...]] = _trace(self)
        self.face_of: dict[Dart, int] = {}
        for f, walk in enumerate(self.faces):
            for d in walk:
                self.face_of[d] = f
        self._components()
        self._check_euler()
        self._assign_outer(outer_hint)

    # -- construction helpers -------------------------------------------------

    def _check_rotation(self) -> None:
        expected: dict[Vertex, set[Dart]] = {v: set() for v in self.rotation}
        for e in self.edges.values():
            for d, v in ((Dart(e.id, 0), e.tail), (Dart(e.id, 1), e.head)):
                if v not in expected:
                    raise DanglingDart(f"edge {e.id} ends at {v!r}, which has no rotation")
                expected[v].add(d)
        for v, ds in self.rotation.items():
            if len(set(ds)) != len(ds) or set(ds) != expected[v]:
                raise DanglingDart(f"rotation at {v!r} is not a permutation of its darts")
            for i, d in enumerate(ds):
                self._pos[d] = i

    def _components(self) -> None:
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in self.edges.values():
            a, b = find(e.tail), find(e.head)
            if a != b:
                parent[a] = b
        groups: dict[Vertex, list] = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        comps = sorted((tuple(g) for g in groups.values()), key=lambda g: _vkey(g[0]))
        self.components: list[tuple] = comps
        self.component_of: dict[Vertex, int] = {v: i for i, g in enumerate(comps) for v in g}

    def _check_euler(self) -> None:
        nv = [0] * len(self.components)
        ne = [0] * len(self.components)
        nf = [0] * len(self.components)
        for v in self.vertices:
            nv[self.component_of[v]] += 1
        for e in self.edges.values():
            ne[self.component_of[e.tail]] += 1
        for walk in self.faces:
            nf[self.component_of[self.origin(walk[0])]] += 1
        for c in range(len(self.components)):
            if ne[c] and nv[c] - ne[c] + nf[c] != 2:
                raise NonPlanarEmbedding(
                    f"component {c}: V - E + F = {nv[c]} - {ne[c]} + {nf[c]} != 2"
                )

    def _assign_outer(self, hint: Iterable[Dart]) -> None:
        outer: dict[int, int] = {}
        for d in hint:
            if d not in self.face_of:
                raise MissingOuterFace(f"outer-face hint {d} is not a dart of the map")
            c = self.component_of[self.origin(d)]
            f = self.face_of[d]
            if outer.setdefault(c, f) != f:
                raise MissingOuterFace(f"conflicting outer-face hints in component {c}")
        for c, comp in enumerate(self.components):
            if c not in outer:
                if any(self.rotation[v] for v in comp):
                    raise MissingOuterFace(f"no outer face given for component {c}")
        self.outer_faces: dict[int, int] = outer

    # -- local queries ---------------------------------------------------------

    def origin(self, d: Dart):
        e = self.edges[d.edge]
        return e.head if d.rev else e.tail

    def head(self, d: Dart):
        e = self.edges[d.edge]
        return e.tail if d.rev else e.head

    def string(self, d: Dart) -> str:
        return self.edges[d.edge].string

    def ccw_next(self, d: Dart) -> Dart:
        rot = self.rotation[self.origin(d)]
        return rot[(self._pos[d] + 1) % len(rot)]

    def ccw_prev(self, d: Dart) -> Dart:
        rot = self.rotation[self.origin(d)]
        return rot[(self._pos[d] - 1) % len(rot)]

    def face_next(self, d: Dart) -> Dart:
        return self.ccw_prev(d.twin)

    def darts(self) -> list[Dart]:
        return [Dart(e, r) for e in sorted(self.edges) for r in (0, 1)]

    def dart_points(self, d: Dart) -> tuple:
        pts = self.edges[d.edge].points
        return tuple(reversed(pts)) if d.rev else pts

    # -- faces -----------------------------------------------------------------

    def outer_face_of(self, v) -> int:
        return self.outer_faces[self.component_of[v]]

    def is_outer_face(self, f: int) -> bool:
        return f in self.outer_faces.values()

    def is_outer_vertex(self, v) -> bool:
        f = self.outer_faces.get(self.component_of[v])
        return any(self.face_of[d] == f for d in self.rotation[v])

    def outer_vertices(self) -> list:
        return [v for v in self.vertices if self.rotation[v] and self.is_outer_vertex(v)]

    def faces_at(self, v) -> set[int]:
        return {self.face_of[d] for d in self.rotation[v]}

    def face_points(self, f: int) -> list:
        """Closed polygon of point ids around face ``f`` (last point not repeated)."""
        pts: list = []
        for d in self.faces[f]:
            pts.extend(self.dart_points(d)[:-1])
        return pts

    def degree(self, v) -> int:
        return len(self.rotation[v])


def _vkey(v):
    return (type(v).__name__, v) if not isinstance(v, str) else ("", _natural(v))


def _natural(s: str):
    # natural sort so "p10" follows "p9"
    out: list = []
    num = ""
    for ch in s:
        if ch.isdigit():
            num += ch
        else:
            if num:
                out.append((0, int(num), ""))
                num = ""
            out.append((1, 0, ch))
    if num:
        out.append((0, int(num), ""))
    return tuple(out)


vertex_key = _vkey


def _trace(m: PlaneMap) -> list[tuple[Dart, ...]]:
    seen: set[Dart] = set()
    faces = []
    for d0 in m.darts():
        if d0 in seen:
            continue
        walk = []
        d = d0
        while d not in seen:
            seen.add(d)
            walk.append(d)
            d = m.face_next(d)
        if d != d0:
            raise DanglingDart("face traversal did not close")
        faces.append(tuple(walk))
    return faces


# -- public operations ---------------------------------------------------------


def build_map(
    vertices: Iterable[Vertex] | None,
    edges: Mapping[int, Edge] | Iterable[Edge],
    rotation: Mapping[Vertex, Sequence[Dart]],
    outer_face_hint: Dart | Iterable[Dart],
) -> PlaneMap:
    """Validate a rotation system and return the traced map.

    Args:
        vertices: Expected vertex set, or None to take the rotation keys.
        edges: Edges by id (or an iterable of edges).
        rotation: Counterclockwise outgoing darts per vertex.
        outer_face_hint: A dart on the outer face, or one per component.

    Raises:
        DanglingDart: rotations are not permutations of the incident darts.
        NonPlanarEmbedding: the Euler relation fails in some component.
    """
    if not isinstance(edges, Mapping):
        edges = {e.id: e for e in edges}
    if vertices is not None and set(vertices) != set(rotation):
        raise DanglingDart("vertex list does not match the rotation keys")
    if isinstance(outer_face_hint, Dart):
        outer_face_hint = [outer_face_hint]
    return PlaneMap(edges, rotation, outer_face_hint)


def trace_faces(m: PlaneMap) -> list[tuple[Dart, ...]]:
    return list(m.faces)


@dataclass(frozen=True)
class Block:
    edges: frozenset[int]
    vertices: frozenset

    @property
    def is_bridge(self) -> bool:
        return len(self.edges) == 1 and len(self.vertices) == 2


@dataclass
class BlockDecomposition:
    blocks: list[Block]
    cut_vertices: frozenset
    boundaries: list["CycleRef | None"] = field(default_factory=list)


def biconnected_blocks(m: PlaneMap, with_boundaries: bool = True) -> BlockDecomposition:
    """Blocks of the underlying multigraph (loops form their own blocks).

    Each block that is not a bridge gets the cycle bounding its outer face.
    """
    blocks = _blocks(m.vertices, m.edges.values())
    cuts: dict = {}
    for b in blocks:
        for v in b.vertices:
            cuts[v] = cuts.get(v, 0) + 1
    cut_vertices = frozenset(v for v, k in cuts.items() if k > 1)
    dec = BlockDecomposition(blocks, cut_vertices)
    if with_boundaries:
        dec.boundaries = [None if b.is_bridge else block_boundary(m, b) for b in blocks]
    return dec


def _blocks(vertices: Iterable, edges: Iterable[Edge]) -> list[Block]:
    """Iterative Hopcroft-Tarjan over a multigraph given as Edge records."""
    adj: dict = {v: [] for v in vertices}
    loops = []
    for e in edges:
        if e.tail == e.head:
            loops.append(e)
            continue
        adj[e.tail].append((e.head, e.id))
        adj[e.head].append((e.tail, e.id))
    for v in adj:
        adj[v].sort(key=lambda t: t[1])
    disc: dict = {}
    low: dict = {}
    out: list[Block] = []
    counter = 0
    for root in sorted(adj, key=_vkey):
        if root in disc or not adj[root]:
            continue
        disc[root] = low[root] = counter
        counter += 1
        stack_e: list[tuple] = []
        it = [(root, None, iter(adj[root]))]
        while it:
            v, pe, nbrs = it[-1]
            advanced = False
            for w, eid in nbrs:
                if eid == pe:
                    continue
                if w not in disc:
                    stack_e.append((v, w, eid))
                    disc[w] = low[w] = counter
                    counter += 1
                    it.append((w, eid, iter(adj[w])))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    stack_e.append((v, w, eid))
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            it.pop()
            if it:
                u = it[-1][0]
                low[u] = min(low[u], low[v])
                if low[v] >= disc[u]:
                    es, vs = set(), set()
                    while True:
                        a, b, eid = stack_e.pop()
                        es.add(eid)
                        vs.update((a, b))
                        if eid == pe:
                            break
                    out.append(Block(frozenset(es), frozenset(vs)))
    for e in loops:
        out.append(Block(frozenset([e.id]), frozenset([e.tail])))
    out.sort(key=lambda b: min(b.edges))
    return out


# -- cycles --------------------------------------------------------------------


@dataclass(frozen=True)
class CycleRef:
    """A simple cycle with its sides classified.

    ``darts`` run counterclockwise, i.e. with the closed disk on their left.
    """

    darts: tuple[Dart, ...]
    vertices: tuple
    edges: tuple[int, ...]
    interior_faces: frozenset[int]
    interior_edges: frozenset[int]
    interior_vertices: frozenset
    exterior_vertices: frozenset
    out_dart: Mapping = field(repr=False, compare=False, default_factory=dict)
    in_dart: Mapping = field(repr=False, compare=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.darts)


def _order_closed_walk(m: PlaneMap, darts: Sequence[Dart]) -> list[Dart]:
    if not darts:
        raise NotACycle("empty cycle")
    darts = list(darts)
    for a, b in zip(darts, darts[1:] + darts[:1]):
        if m.head(a) != m.origin(b):
            raise NotACycle("darts do not form a closed walk")
    verts = [m.origin(d) for d in darts]
    if len(set(verts)) != len(verts) or len({d.edge for d in darts}) != len(darts):
        raise NotACycle("walk repeats a vertex or an edge")
    return darts


def cycle_from_edges(m: PlaneMap, edge_ids: Iterable[int]) -> list[Dart]:
    """Orient a set of edge ids as a closed walk of darts."""
    ids = list(edge_ids)
    if not ids:
        raise NotACycle("empty cycle")
    for e in ids:
        if e not in m.edges:
            raise NotACycle(f"unknown edge {e}")
    remaining = set(ids)
    first = min(ids)
    walk = [Dart(first, 0)]
    remaining.discard(first)
    while remaining:
        v = m.head(walk[-1])
        nxt = [Dart(e, r) for e in sorted(remaining) for r in (0, 1) if m.origin(Dart(e, r)) == v]
        if not nxt:
            raise NotACycle("edges do not form a single cycle")
        walk.append(nxt[0])
        remaining.discard(nxt[0].edge)
    return _order_closed_walk(m, walk)


def reachable_faces(m: PlaneMap, walls: set[int], start: int) -> set[int]:
    """Faces reachable from ``start`` in the dual without crossing ``walls``."""
    seen = {start}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for d in m.faces[f]:
            if d.edge in walls:
                continue
            g = m.face_of[d.twin]
            if g not in seen:
                seen.add(g)
                queue.append(g)
    return seen


def cycle_interior(m: PlaneMap, cycle: Sequence[Dart] | Iterable[int]) -> CycleRef:
    """Classify every face, edge and vertex relative to a simple cycle.

    Args:
        cycle: The cycle as a closed walk of darts, or as a set of edge ids.

    Raises:
        NotACycle: the input is not a simple cycle of ``m``.
    """
    cycle = list(cycle)
    if cycle and not isinstance(cycle[0], Dart):
        darts = cycle_from_edges(m, cycle)
    else:
        darts = _order_closed_walk(m, cycle)
    walls = {d.edge for d in darts}
    comp = m.component_of[m.origin(darts[0])]
    outside = reachable_faces(m, walls, m.outer_faces[comp])
    if m.face_of[darts[0]] in outside:
        darts = [d.twin for d in reversed(darts)]
    for d in darts:
        if m.face_of[d] in outside or m.face_of[d.twin] not in outside:
            raise NotACycle("cycle sides are inconsistent")
    comp_faces = {m.face_of[d] for v in m.components[comp] for d in m.rotation[v]}
    inside_faces = frozenset(comp_faces - outside)
    on_cycle = {m.origin(d) for d in darts}
    in_edges = frozenset(
        e for e in m.edges if e not in walls and m.face_of[Dart(e, 0)] in inside_faces
    )
    in_verts, out_verts = set(), set()
    for v in m.components[comp]:
        if v in on_cycle:
            continue
        if m.face_of[m.rotation[v][0]] in inside_faces:
            in_verts.add(v)
        else:
            out_verts.add(v)
    start = min(range(len(darts)), key=lambda i: _vkey(m.origin(darts[i])))
    darts = darts[start:] + darts[:start]
    return CycleRef(
        darts=tuple(darts),
        vertices=tuple(m.origin(d) for d in darts),
        edges=tuple(d.edge for d in darts),
        interior_faces=inside_faces,
        interior_edges=in_edges,
        interior_vertices=frozenset(in_verts),
        exterior_vertices=frozenset(out_verts),
        out_dart={m.origin(d): d for d in darts},
        in_dart={m.head(d): d for d in darts},
    )


def _ccw_range(m: PlaneMap, start: Dart, stop: Dart) -> list[Dart]:
    out = [start]
    d = start
    while d != stop:
        d = m.ccw_next(d)
        out.append(d)
    return out


def rotation_inside(m: PlaneMap, c: CycleRef, v) -> list[Dart]:
    """Counterclockwise darts at ``v`` in the closed disk, from one cycle dart to the other."""
    if v not in c.out_dart:
        raise VertexNotOnCycle(f"{v!r} is not on the cycle")
    return _ccw_range(m, c.out_dart[v], c.in_dart[v].twin)


def rotation_outside(m: PlaneMap, c: CycleRef, v) -> list[Dart]:
    if v not in c.out_dart:
        raise VertexNotOnCycle(f"{v!r} is not on the cycle")
    return _ccw_range(m, c.in_dart[v].twin, c.out_dart[v])


def block_boundary(m: PlaneMap, b: Block) -> CycleRef | None:
    """The cycle bounding the outer face of block ``b`` (None for bridges)."""
    if b.is_bridge:
        return None
    if len(b.edges) == 1:
        (e,) = b.edges
        return cycle_interior(m, [Dart(e, 0)])
    comp = m.component_of[next(iter(b.vertices))]
    outside = reachable_faces(m, set(b.edges), m.outer_faces[comp])
    # darts of the block that see the region containing the outer face
    seen_out = [Dart(e, r) for e in sorted(b.edges) for r in (0, 1) if m.face_of[Dart(e, r)] in outside]
    # restrict the rotation to the block and walk its outer face
    sub = {d for e in b.edges for d in (Dart(e, 0), Dart(e, 1))}

    def sub_ccw_prev(d: Dart) -> Dart:
        x = m.ccw_prev(d)
        while x not in sub:
            x = m.ccw_prev(x)
        return x

    d0 = seen_out[0]
    walk = [d0]
    d = sub_ccw_prev(d0.twin)
    while d != d0:
        walk.append(d)
        d = sub_ccw_prev(d.twin)
    return cycle_interior(m, [x.twin for x in reversed(walk)])
