"""Fixture catalogue and the seeded random instance corpus.

Every fixture is a geometric drawing with integer coordinates.  The expected
answers are certified by the brute-force oracle in the test suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from .errors import InvalidInput
from .ingest import DrawingDoc, Polyline, polylines_to_stringset, serialize_drawing

DEFAULT_SEED = 20240611


def _doc(name: str, walks: list[list[tuple[int, int]]], prefix: str = "s") -> DrawingDoc:
    pls = [Polyline(f"{prefix}{i}", tuple(w)) for i, w in enumerate(walks)]
    return DrawingDoc("geometric", polylines=pls, name=name)


def _complete(name: str, pts, bent: dict | None = None) -> DrawingDoc:
    """Drawing of K_n on ``pts``: straight edges unless listed in ``bent``."""
    bent = bent or {}
    walks = []
    for i, j in combinations(range(len(pts)), 2):
        walks.append([pts[i], *bent.get((i, j), ()), pts[j]])
    return _doc(name, walks, prefix="e")


# crossing of edges 0-2 and 1-3 sits on the unbounded face
_K4X_OUT = [(0, 0), (8, 0), (5, 4), (3, 4)]
_K4X_OUT_BENT = {(0, 2): [(4, 8)], (1, 3): [(4, 8)]}

_RECT_K5 = [
    [(4, 18), (2, 8), (3, 15), (14, 15), (20, 12)],
    [(6, 3), (15, 0), (12, 13), (19, 0), (14, 8)],
    [(7, 18), (3, 10), (0, 0), (0, 20), (17, 0)],
    [(12, 6), (13, 0), (16, 7), (14, 15), (17, 7)],
    [(11, 7), (7, 14), (9, 0), (13, 17), (20, 3)],
    [(5, 20), (9, 3), (10, 16), (13, 16), (6, 9)],
]
# fifth vertices added to FIX_K4X_OUT with straight edges
_B_K5_APEX = [(2, 1), (4, 10), (-2, -3), (10, -3)]


def catalogue() -> dict[str, DrawingDoc]:
    """The named fixtures, in a fixed order."""
    out = {
        "FIX_X": _doc("FIX_X", [[(0, 0), (4, 4)], [(0, 4), (4, 0)]]),
        "FIX_PAR": _doc("FIX_PAR", [[(0, 0), (4, 0)], [(0, 2), (4, 2)]]),
        "FIX_B": _doc("FIX_B", [[(0, 0), (4, 8), (5, 4)], [(0, 0), (8, 0)], [(8, 0), (4, 8), (3, 4)]]),
        "FIX_W": _doc(
            "FIX_W",
            [
                [(0, 8), (8, 0), (10, 5)],
                [(16, 8), (8, 0), (6, 5)],
                [(16, 8), (8, 16), (6, 11)],
                [(0, 8), (8, 16), (10, 11)],
            ],
        ),
        "FIX_TRI": _doc(
            "FIX_TRI",
            [
                [(2, 2), (0, 0), (12, 0), (10, 2)],
                [(9, 1), (12, 0), (6, 12), (5, 8)],
                [(7, 8), (6, 12), (0, 0), (3, 1)],
            ],
        ),
        "FIX_DOT3": _doc(
            "FIX_DOT3",
            [
                [(0, 0), (12, 0), (10, 2)],
                [(9, 1), (12, 0), (6, 12), (5, 8)],
                [(7, 8), (6, 12), (0, 0)],
            ],
        ),
        "FIX_FOREST": _doc("FIX_FOREST", [[(0, 0), (2, 2), (4, 0)], [(6, 0), (6, 4)], [(1, 6), (5, 6), (5, 9)]]),
        "FIX_K4X_OUT": _complete("FIX_K4X_OUT", _K4X_OUT, _K4X_OUT_BENT),
        "FIX_K4X_IN": _complete("FIX_K4X_IN", [(0, 0), (4, 0), (4, 4), (0, 4)]),
        "FIX_K4_PLANAR": _complete("FIX_K4_PLANAR", [(0, 0), (8, 0), (4, 8), (4, 3)]),
    }
    return out


def good_drawing_corpus() -> dict[str, DrawingDoc]:
    """Good drawings of K4 and K5 (the K4 fixtures plus ten K5 drawings)."""
    cat = catalogue()
    out = {k: cat[k] for k in ("FIX_K4X_OUT", "FIX_K4X_IN", "FIX_K4_PLANAR")}
    for i, pts in enumerate(_RECT_K5):
        name = f"K5_RECT_{i}"
        out[name] = _complete(name, pts)
    for i, apex in enumerate(_B_K5_APEX):
        name = f"K5_B_{i}"
        out[name] = _complete(name, _K4X_OUT + [apex], _K4X_OUT_BENT)
    return out


def all_fixtures() -> dict[str, DrawingDoc]:
    out = catalogue()
    out.update(good_drawing_corpus())
    return out


def write_fixtures(directory) -> list[Path]:
    """Write every fixture as ``<name>.json``; returns the paths written."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, doc in all_fixtures().items():
        p = d / f"{name}.json"
        p.write_bytes(serialize_drawing(doc))
        paths.append(p)
    return paths


# -- random corpus ---------------------------------------------------------------


@dataclass
class CorpusInstance:
    name: str
    polylines: list[Polyline]

    def doc(self) -> DrawingDoc:
        return DrawingDoc("geometric", polylines=list(self.polylines), name=self.name)

    def stringset(self):
        return polylines_to_stringset(self.polylines)


def _draw(rng: random.Random, max_strings: int, max_segments: int, hi: int) -> list[Polyline]:
    n = rng.randint(1, max_strings)
    out = []
    for i in range(n):
        k = rng.randint(1, max_segments)
        pts = [(rng.randint(0, hi), rng.randint(0, hi))]
        while len(pts) < k + 1:
            q = (rng.randint(0, hi), rng.randint(0, hi))
            if q != pts[-1]:
                pts.append(q)
        out.append(Polyline(f"s{i}", tuple(pts)))
    return out


def random_corpus(
    count: int = 300,
    seed: int = DEFAULT_SEED,
    max_strings: int = 6,
    max_segments: int = 3,
    hi: int = 20,
    max_vertices: int = 16,
) -> list[CorpusInstance]:
    """Seeded random geometric instances in general position.

    Draws that violate general position or whose map has more than
    ``max_vertices`` vertices are discarded and redrawn.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        pls = _draw(rng, max_strings, max_segments, hi)
        try:
            ss = polylines_to_stringset(pls)
        except InvalidInput:
            continue
        if len(ss.plane_map().vertices) > max_vertices:
            continue
        out.append(CorpusInstance(f"R{seed}_{len(out):04d}", pls))
    return out
