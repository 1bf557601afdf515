"""Brute-force obstruction oracle: enumerate simple cycles of G(Σ).

Independent of the search algorithms.  The enumeration walks simple paths
and keeps, for the vertices already passed, how many are rainbow on the left
of the path and how many on the right.  A cycle is an obstruction when the
side that turns out to be its interior has at most two rainbows, so a path
can be abandoned as soon as both counts reach three.
"""

from __future__ import annotations

from typing import Iterator

from .errors import CapExceeded
from .obstruction import ObstructionReport, _as_map, make_report
from .planegraph import Dart, PlaneMap, cycle_interior, vertex_key


class _Local:
    def __init__(self, m: PlaneMap):
        self.m = m
        self.pos = {}
        self.rot = {}
        for v, ds in m.rotation.items():
            self.rot[v] = ds
            for i, d in enumerate(ds):
                self.pos[d] = i
        self.string = {e.id: e.string for e in m.edges.values()}
        self.head = {}
        for e in m.edges.values():
            self.head[Dart(e.id, 0)] = e.head
            self.head[Dart(e.id, 1)] = e.tail

    def sides(self, d_in: Dart, d_out: Dart) -> tuple[bool, bool]:
        """Rainbow status on the left and right of a path through a vertex."""
        t = d_in.twin
        ds = self.rot[self.m.origin(d_out)]
        n = len(ds)
        i, j = self.pos[d_out], self.pos[t]
        left = [ds[(i + k) % n] for k in range(((j - i) % n) + 1)]
        right = [ds[(j + k) % n] for k in range(((i - j) % n) + 1)]
        ls = [self.string[d.edge] for d in left]
        rs = [self.string[d.edge] for d in right]
        return len(set(ls)) == len(ls), len(set(rs)) == len(rs)


def iter_obstructions(sigma, avoid=frozenset(), vertex_cap: int | None = 16) -> Iterator[list[Dart]]:
    """Yield every obstruction once, as a closed walk of darts."""
    m = _as_map(sigma)
    if vertex_cap is not None and len(m.vertices) > vertex_cap:
        raise CapExceeded(f"{len(m.vertices)} vertices exceed the cap of {vertex_cap}")
    loc = _Local(m)
    order = [v for v in m.vertices if v not in avoid and m.rotation[v]]
    rank = {v: i for i, v in enumerate(order)}

    def interior_is_left(path: list[Dart]) -> bool:
        c = cycle_interior(m, path)
        return path[0] in set(c.darts)

    def dfs(s, path, visited, lr, rr):
        v = loc.head[path[-1]]
        d_in = path[-1]
        for d in m.rotation[v]:
            if d.edge == d_in.edge:
                continue
            w = loc.head[d]
            if w == s:
                if d.edge < path[0].edge:
                    continue
                l1, r1 = loc.sides(d_in, d)
                l2, r2 = loc.sides(d, path[0])
                nl = lr + l1 + l2
                nr = rr + r1 + r2
                if nl >= 3 and nr >= 3:
                    continue
                cyc = path + [d]
                if nl <= 2 and nr <= 2:
                    yield cyc
                elif (nl <= 2) == interior_is_left(cyc):
                    yield cyc
                continue
            if w in visited or w not in rank or rank[w] < rank[s]:
                continue
            l1, r1 = loc.sides(d_in, d)
            nl, nr = lr + l1, rr + r1
            if nl >= 3 and nr >= 3:
                continue
            visited.add(w)
            path.append(d)
            yield from dfs(s, path, visited, nl, nr)
            path.pop()
            visited.discard(w)

    for s in order:
        for d in m.rotation[s]:
            w = loc.head[d]
            if w == s:
                # a loop is a cycle with one vertex, hence an obstruction
                if not d.rev:
                    yield [d]
                continue
            if w not in rank or rank[w] < rank[s]:
                continue
            yield from dfs(s, [d], {s, w}, 0, 0)


def brute_force_obstruction(
    sigma, vertex_cap: int = 16, minimize_delta: bool = False, avoid=frozenset()
) -> ObstructionReport | None:
    """First obstruction in enumeration order, or the one with smallest |δ|.

    Raises:
        CapExceeded: the map has more than ``vertex_cap`` vertices.
    """
    m = _as_map(sigma)
    best = None
    best_delta = None
    for cyc in iter_obstructions(m, avoid, vertex_cap):
        if not minimize_delta:
            return make_report(m, cyc, ["oracle: exhaustive cycle enumeration"])
        k = sum(1 for a, b in zip(cyc, cyc[1:] + cyc[:1]) if m.edges[a.edge].string != m.edges[b.edge].string)
        if best_delta is None or k < best_delta:
            best, best_delta = cyc, k
    if best is None:
        return None
    return make_report(m, best, ["oracle: exhaustive cycle enumeration, minimal |delta|"])


def all_obstruction_curves(sigma, avoid=frozenset(), vertex_cap: int | None = 16) -> set[frozenset[int]]:
    """Every obstruction as the set of segment ids along its curve."""
    m = _as_map(sigma)
    out = set()
    for cyc in iter_obstructions(m, avoid, vertex_cap):
        segs = frozenset(s for d in cyc for s in m.edges[d.edge].segments)
        out.add(segs)
    return out
