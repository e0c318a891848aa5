"""Triangulated disc diagrams: validation, curvature audits and fillings.

A disc diagram has vertices ``0..n-1``, a list of triangles, a boundary
cycle and optionally a map sending each disc vertex to a vertex of a target
complex.  The map is simplicial when every triangle lands on a face of the
target; it may collapse edges (degenerate) unless stated otherwise.

Curvature of a vertex lying in ``a`` triangles is ``6 - a`` in the interior
and ``3 - a`` on the boundary; the sum over a compact surface is ``6 chi``.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import networkx as nx

from .complex import Complex, build_complex
from .errors import BudgetExhausted, NoDiagonal, NotASurface, NotGeodesic

DEFAULT_BUDGET = 24

Edge = tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _tri_edges(t: Sequence[int]) -> tuple[Edge, Edge, Edge]:
    a, b, c = t
    return _edge(a, b), _edge(b, c), _edge(a, c)


@dataclass(frozen=True)
class DiscDiagram:
    disc_vertex_count: int
    triangles: tuple[tuple[int, int, int], ...]
    boundary: tuple[int, ...]
    vertex_map: tuple[int, ...] | None = None

    @classmethod
    def make(cls, n: int, triangles: Iterable[Iterable[int]], boundary: Iterable[int], vertex_map=None) -> "DiscDiagram":
        tris = tuple(sorted(tuple(sorted(int(v) for v in t)) for t in triangles))
        vm = None if vertex_map is None else tuple(int(v) for v in vertex_map)
        return cls(int(n), tris, tuple(int(v) for v in boundary), vm)

    @cached_property
    def edge_counts(self) -> Counter:
        return Counter(e for t in self.triangles for e in _tri_edges(t))

    @property
    def edges(self) -> list[Edge]:
        return sorted(self.edge_counts)

    @cached_property
    def angles(self) -> dict[int, int]:
        a = Counter(v for t in self.triangles for v in t)
        return {v: a.get(v, 0) for v in range(self.disc_vertex_count)}

    @property
    def boundary_set(self) -> frozenset[int]:
        return frozenset(self.boundary)

    @property
    def interior_vertices(self) -> list[int]:
        b = self.boundary_set
        return [v for v in range(self.disc_vertex_count) if v not in b]

    @property
    def area(self) -> int:
        return len(self.triangles)

    def euler_characteristic(self) -> int:
        return self.disc_vertex_count - len(self.edge_counts) + len(self.triangles)

    def to_dict(self) -> dict:
        return {
            "vertices": self.disc_vertex_count,
            "triangles": [list(t) for t in self.triangles],
            "boundary": list(self.boundary),
            "map": None if self.vertex_map is None else list(self.vertex_map),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "DiscDiagram":
        return cls.make(d["vertices"], d["triangles"], d["boundary"], d.get("map"))

    @classmethod
    def from_json(cls, text: str) -> "DiscDiagram":
        return cls.from_dict(json.loads(text))

    def as_complex(self) -> Complex:
        return build_complex(self.triangles, self.disc_vertex_count)


class DiscCheck(NamedTuple):
    ok: bool
    reason: str | None = None
    detail: str = ""


def _vertex_link_kind(tris_at: list[tuple[int, int, int]], v: int) -> str | None:
    """"cycle" or "path" when the link of ``v`` is one of those, else ``None``."""
    g = nx.Graph()
    for t in tris_at:
        a, b = (u for u in t if u != v)
        g.add_edge(a, b)
    if not g.number_of_nodes() or not nx.is_connected(g):
        return None
    degs = Counter(d for _, d in g.degree())
    if set(degs) == {2}:
        return "cycle"
    if degs.get(1) == 2 and set(degs) <= {1, 2}:
        return "path"
    return None


def _surface_structure(n: int, triangles: Sequence[tuple[int, int, int]]) -> tuple[set[int], str | None]:
    """Boundary vertices of a triangulated surface, or a reason it is not one."""
    counts = Counter(e for t in triangles for e in _tri_edges(t))
    if any(c > 2 for c in counts.values()):
        bad = next(e for e, c in counts.items() if c > 2)
        return set(), f"edge {list(bad)} lies in {counts[bad]} triangles"
    at: dict[int, list] = {v: [] for v in range(n)}
    for t in triangles:
        for v in t:
            at[v].append(t)
    boundary = {v for e, c in counts.items() if c == 1 for v in e}
    for v in range(n):
        kind = _vertex_link_kind(at[v], v)
        want = "path" if v in boundary else "cycle"
        if kind != want:
            return boundary, f"the link of vertex {v} is not a {want}"
    return boundary, None


def validate_disc(D: DiscDiagram, X: Complex | None = None) -> DiscCheck:
    """Check the disc invariants; the first violated one is returned as ``reason``."""
    n = D.disc_vertex_count
    if not D.triangles:
        return DiscCheck(False, "empty", "no triangles")
    for t in D.triangles:
        if len(t) != 3 or any(not 0 <= v < n for v in t):
            return DiscCheck(False, "vertex out of range", f"triangle {list(t)}")
        if len(set(t)) < 3:
            return DiscCheck(False, "non-simplicial", f"triangle {list(t)} has a loop")
    dup = [t for t, c in Counter(D.triangles).items() if c > 1]
    if dup:
        return DiscCheck(False, "non-simplicial", f"triangle {list(dup[0])} appears twice (doubled edges)")
    used = {v for t in D.triangles for v in t}
    if len(used) != n:
        return DiscCheck(False, "isolated vertex", f"vertex {min(set(range(n)) - used)} is in no triangle")
    g = nx.Graph(D.edges)
    if not nx.is_connected(g):
        return DiscCheck(False, "disconnected")
    boundary, why = _surface_structure(n, D.triangles)
    if why:
        return DiscCheck(False, "not a surface", why)
    bedges = sorted(e for e, c in D.edge_counts.items() if c == 1)
    cyc = D.boundary
    if len(cyc) < 3 or len(set(cyc)) != len(cyc):
        return DiscCheck(False, "boundary", "boundary must list >= 3 distinct vertices")
    if sorted(_edge(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))) != bedges:
        return DiscCheck(False, "boundary", "boundary edges do not form the given cycle")
    if D.euler_characteristic() != 1:
        return DiscCheck(False, "euler characteristic", f"V - E + F = {D.euler_characteristic()}")
    if D.vertex_map is not None:
        if len(D.vertex_map) != n:
            return DiscCheck(False, "map", f"map has {len(D.vertex_map)} entries for {n} vertices")
        if X is not None:
            for t in D.triangles:
                img = sorted({D.vertex_map[v] for v in t})
                if not X.is_face(img):
                    return DiscCheck(False, "map not simplicial", f"triangle {list(t)} maps to {img}")
    return DiscCheck(True)


# -- Gauss-Bonnet --------------------------------------------------------


@dataclass(frozen=True)
class CurvatureLedger:
    angles: dict[int, int]
    curvature: dict[int, int]
    boundary_vertices: frozenset[int]
    boundary_sum: int
    interior_sum: int
    euler_characteristic: int

    @property
    def total(self) -> int:
        return self.boundary_sum + self.interior_sum

    @property
    def holds(self) -> bool:
        return self.total == 6 * self.euler_characteristic

    def to_dict(self) -> dict:
        return {
            "angles": {str(v): a for v, a in sorted(self.angles.items())},
            "curvature": {str(v): k for v, k in sorted(self.curvature.items())},
            "boundary_vertices": sorted(self.boundary_vertices),
            "boundary_sum": self.boundary_sum,
            "interior_sum": self.interior_sum,
            "euler_characteristic": self.euler_characteristic,
            "holds": self.holds,
        }


def _ledger(angles: dict[int, int], boundary: Iterable[int], chi: int) -> CurvatureLedger:
    b = frozenset(boundary)
    curv = {v: (3 if v in b else 6) - a for v, a in angles.items()}
    bs = sum(k for v, k in curv.items() if v in b)
    return CurvatureLedger(dict(angles), curv, b, bs, sum(curv.values()) - bs, chi)


def gauss_bonnet_audit(S: DiscDiagram | Complex) -> CurvatureLedger:
    """Curvature ledger of a compact triangulated surface (a disc or a closed surface)."""
    if isinstance(S, DiscDiagram):
        tris = list(S.triangles)
        verts = list(range(S.disc_vertex_count))
    else:
        if S.is_empty or any(len(f) != 3 for f in S.facets):
            raise NotASurface("a surface complex must have only triangles as maximal faces")
        tris = list(S.facets)
        verts = list(S.vertices)
    index = {v: i for i, v in enumerate(verts)}
    local = [tuple(index[v] for v in t) for t in tris]
    boundary, why = _surface_structure(len(verts), local)
    if why:
        raise NotASurface(why)
    angles = Counter(v for t in local for v in t)
    edges = {e for t in local for e in _tri_edges(t)}
    chi = len(verts) - len(edges) + len(local)
    led = _ledger({verts[i]: angles.get(i, 0) for i in range(len(verts))}, (verts[i] for i in boundary), chi)
    assert led.holds, "Gauss-Bonnet identity failed"
    return led


def remove_triangle(D: DiscDiagram, t: Sequence[int]) -> DiscDiagram:
    """Remove a triangle touching the boundary so that a disc remains.

    Allowed cases: ``t`` has one boundary edge and its third vertex is
    interior, or ``t`` has two boundary edges (an ear, whose tip disappears).
    Vertices keep their labels except that a vanished ear tip is dropped and
    higher labels shift down by one.
    """
    t = tuple(sorted(t))
    if t not in D.triangles:
        raise ValueError(f"{list(t)} is not a triangle of the disc")
    if len(D.triangles) == 1:
        raise ValueError("cannot remove the last triangle")
    cyc = list(D.boundary)
    L = len(cyc)
    pos = {v: i for i, v in enumerate(cyc)}
    bedges = [e for e in _tri_edges(t) if D.edge_counts[e] == 1]
    tris = [s for s in D.triangles if s != t]
    vm = None if D.vertex_map is None else list(D.vertex_map)
    if len(bedges) == 1:
        u, w = bedges[0]
        (x,) = set(t) - {u, w}
        if x in pos:
            raise ValueError("removal would pinch the disc")
        i, j = pos[u], pos[w]
        if (i + 1) % L == j:
            new = cyc[: i + 1] + [x] + cyc[i + 1 :]
        else:
            new = cyc[: j + 1] + [x] + cyc[j + 1 :]
        return DiscDiagram.make(D.disc_vertex_count, tris, new, vm)
    if len(bedges) == 2:
        (tip,) = set(bedges[0]) & set(bedges[1])
        if D.angles[tip] != 1:
            raise ValueError("removal would disconnect the disc")
        new = [v for v in cyc if v != tip]

        def lab(v):
            return v - 1 if v > tip else v

        if vm is not None:
            del vm[tip]
        return DiscDiagram.make(
            D.disc_vertex_count - 1,
            [tuple(lab(v) for v in s) for s in tris],
            [lab(v) for v in new],
            vm,
        )
    raise ValueError(f"{list(t)} does not touch the boundary along an edge")


def removable_triangles(D: DiscDiagram) -> list[tuple[int, int, int]]:
    out = []
    b = D.boundary_set
    for t in D.triangles:
        be = [e for e in _tri_edges(t) if D.edge_counts[e] == 1]
        if len(be) == 1:
            (x,) = set(t) - set(be[0])
            if x not in b:
                out.append(t)
        elif len(be) == 2:
            (tip,) = set(be[0]) & set(be[1])
            if D.angles[tip] == 1:
                out.append(t)
    return out if len(D.triangles) > 1 else []


def update_ledger_after_removal(led: CurvatureLedger, D: DiscDiagram, t: Sequence[int]) -> CurvatureLedger:
    """Ledger of ``remove_triangle(D, t)`` obtained by a local update of ``led``."""
    t = tuple(sorted(t))
    angles = dict(led.angles)
    boundary = set(led.boundary_vertices)
    for v in t:
        angles[v] -= 1
    bedges = [e for e in _tri_edges(t) if D.edge_counts[e] == 1]
    if len(bedges) == 1:
        (x,) = set(t) - set(bedges[0])
        boundary.add(x)  # the opposite vertex moves to the boundary
        relabel = None
    else:
        (tip,) = set(bedges[0]) & set(bedges[1])
        del angles[tip]
        boundary.discard(tip)
        relabel = tip
    bs, ins = led.boundary_sum, led.interior_sum
    for v in set(t) | set(led.boundary_vertices) ^ boundary:
        old = led.curvature.get(v)
        if old is not None:
            if v in led.boundary_vertices:
                bs -= old
            else:
                ins -= old
        if v in angles:
            k = (3 if v in boundary else 6) - angles[v]
            if v in boundary:
                bs += k
            else:
                ins += k
    curv = {v: (3 if v in boundary else 6) - a for v, a in angles.items()}
    if relabel is not None:

        def lab(v):
            return v - 1 if v > relabel else v

        angles = {lab(v): a for v, a in angles.items()}
        curv = {lab(v): k for v, k in curv.items()}
        boundary = {lab(v) for v in boundary}
    return CurvatureLedger(angles, curv, frozenset(boundary), bs, ins, led.euler_characteristic)


def boundary_geodesic_curvature(D: DiscDiagram, alpha: Sequence[int]) -> int:
    """Sum of boundary curvature over the interior vertices of a boundary arc.

    ``alpha`` must be a contiguous arc of the boundary (either direction)
    that is a geodesic in the disc's 1-skeleton.  For any simplicial disc
    the result is at most 1.
    """
    alpha = list(alpha)
    cyc = list(D.boundary)
    L = len(cyc)
    if len(alpha) < 2 or len(set(alpha)) != len(alpha) or len(alpha) > L:
        raise ValueError("alpha must be a boundary arc with at least two distinct vertices")
    pos = {v: i for i, v in enumerate(cyc)}
    if any(v not in pos for v in alpha):
        raise ValueError("alpha leaves the boundary")
    step = (pos[alpha[1]] - pos[alpha[0]]) % L
    if step not in (1, L - 1) or any((pos[b] - pos[a]) % L != step for a, b in zip(alpha, alpha[1:])):
        raise ValueError("alpha is not a contiguous boundary arc")
    dist = nx.shortest_path_length(nx.Graph(D.edges), alpha[0], alpha[-1])
    if dist != len(alpha) - 1:
        raise NotGeodesic(f"arc of length {len(alpha) - 1} joins vertices at distance {dist}")
    return sum(3 - D.angles[v] for v in alpha[1:-1])


# -- fillings ------------------------------------------------------------


def _check_closed_walk(X: Complex, gamma: Sequence[int]) -> list[int]:
    g = [int(v) for v in gamma]
    if len(g) < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    for v in g:
        X.check_vertex(v)
    for i in range(len(g)):
        a, b = g[i], g[(i + 1) % len(g)]
        if a != b and not X.adjacent(a, b):
            raise ValueError(f"consecutive images {a}, {b} are neither equal nor adjacent")
    return g


def _image_face(X: Complex, *vs: int) -> bool:
    return X.is_face(sorted(set(vs)))


def fill_short_cycle(X: Complex, gamma: Sequence[int], k: int) -> DiscDiagram:
    """Fill a short cycle by repeatedly splitting along diagonals.

    ``gamma`` lists the images of the cycle's vertices.  A pair of
    nonconsecutive positions whose images coincide or are adjacent splits the
    polygon in two; the lexicographically first such pair is used.  The
    result has no interior vertices.
    """
    g = _check_closed_walk(X, gamma)
    m = len(g)
    if m >= k:
        raise ValueError(f"cycle length {m} is not below k={k}")
    tris: list[tuple[int, int, int]] = []

    def split(poly: list[int]) -> None:
        if len(poly) == 3:
            if not _image_face(X, *(g[p] for p in poly)):
                raise NoDiagonal(f"images {[g[p] for p in poly]} do not span a face")
            tris.append(tuple(sorted(poly)))
            return
        L = len(poly)
        for i in range(L):
            for j in range(i + 2, L):
                if i == 0 and j == L - 1:
                    continue
                a, b = g[poly[i]], g[poly[j]]
                if a == b or X.adjacent(a, b):
                    split(poly[i : j + 1])
                    split(poly[j:] + poly[: i + 1])
                    return
        raise NoDiagonal(f"no diagonal among images {[g[p] for p in poly]}")

    split(list(range(m)))
    return DiscDiagram.make(m, tris, range(m), g)


def _check_embedded_cycle(X: Complex, gamma: Sequence[int]) -> list[int]:
    g = _check_closed_walk(X, gamma)
    if len(set(g)) != len(g):
        raise ValueError("the cycle must be embedded (distinct vertices)")
    return g


def _chord_fillable(X: Complex, img: list[int], r: list[int]) -> bool:
    # interval DP: can the polygon r be triangulated by chords with face images?
    L = len(r)
    x = [img[v] for v in r]
    ok = [[False] * L for _ in range(L)]
    for i in range(L - 1):
        ok[i][i + 1] = True
    for span_ in range(2, L):
        for i in range(L - span_):
            j = i + span_
            if not (x[i] == x[j] or X.adjacent(x[i], x[j])) and not (i == 0 and j == L - 1):
                continue
            ok[i][j] = any(ok[i][m] and ok[m][j] and _image_face(X, x[i], x[m], x[j]) for m in range(i + 1, j))
    return ok[0][L - 1]


class _FillSearch:
    def __init__(self, X: Complex, cycle: list[int], interior: int):
        self.X = X
        self.img = list(cycle)
        L = len(cycle)
        self.edges = {_edge(i, (i + 1) % L) for i in range(L)}
        self.tris: list[tuple[int, int, int]] = []
        self.interior = interior
        self._cands: dict[tuple[int, int], list[int]] = {}

    def candidates(self, a: int, b: int) -> list[int]:
        key = (a, b) if a <= b else (b, a)
        if key not in self._cands:
            X = self.X
            if a == b:
                out = {a} | set(X.adjacency[a])
            else:
                out = {a, b} | {u for u in X.adjacency[a] & X.adjacency[b] if _image_face(X, a, b, u)}
            self._cands[key] = sorted(out)
        return self._cands[key]

    def run(self) -> bool:
        L = len(self.img)
        return self.dfs([list(range(L))], self.interior)

    def dfs(self, regions: list[list[int]], free: int) -> bool:
        if not regions:
            return free == 0
        if free == 0 and not all(_chord_fillable(self.X, self.img, r) for r in regions):
            return False
        r = regions[-1]
        rest = regions[:-1]
        p, q = r[0], r[1]
        xp, xq = self.img[p], self.img[q]
        L = len(r)
        X = self.X
        for j in range(2, L):
            w = r[j]
            if not _image_face(X, xp, xq, self.img[w]):
                continue
            new = []
            if j != 2:
                new.append(_edge(q, w))
            if j != L - 1:
                new.append(_edge(w, p))
            if any(e in self.edges for e in new):
                continue
            self.edges.update(new)
            self.tris.append(tuple(sorted((p, q, w))))
            A = r[1 : j + 1]
            B = r[j:] + [p]
            if self.dfs(rest + [s for s in (B, A) if len(s) >= 3], free):
                return True
            self.tris.pop()
            self.edges.difference_update(new)
        if free > 0:
            w = len(self.img)
            for xw in self.candidates(xp, xq):
                self.img.append(xw)
                new = [_edge(p, w), _edge(w, q)]
                self.edges.update(new)
                self.tris.append((min(p, q), max(p, q), w))
                if self.dfs(rest + [[p, w] + r[1:]], free - 1):
                    return True
                self.tris.pop()
                self.edges.difference_update(new)
                self.img.pop()
        return False


def minimal_fill(X: Complex, gamma: Sequence[int], budget: int | None = None) -> DiscDiagram:
    """A minimum-area simplicial filling diagram of an embedded cycle.

    A disc with boundary length ``L`` and ``I`` interior vertices has
    ``L - 2 + 2I`` triangles, so the search deepens over ``I``.  Each level is
    a depth-first search that always fills the first edge of the current
    region, either with a vertex already on that region's boundary or with a
    new interior vertex.  Raises :class:`BudgetExhausted` if no filling with
    at most ``budget`` triangles exists.
    """
    budget = DEFAULT_BUDGET if budget is None else int(budget)
    cyc = _check_embedded_cycle(X, gamma)
    L = len(cyc)
    I = 0
    while L - 2 + 2 * I <= budget:
        s = _FillSearch(X, cyc, I)
        if s.run():
            return DiscDiagram.make(len(s.img), s.tris, range(L), s.img)
        I += 1
    raise BudgetExhausted(f"no filling of {cyc} with at most {budget} triangles")


class MinimalCheck(NamedTuple):
    ok: bool
    reasons: list[str]


def verify_minimal_diagram(X: Complex, D: DiscDiagram, k: int) -> MinimalCheck:
    """Check a filling diagram is simplicial, has interior degree >= k and is nondegenerate."""
    reasons = []
    v = validate_disc(D, X)
    if not v.ok:
        reasons.append("non-simplicial" if v.reason == "non-simplicial" else f"invalid disc: {v.reason}")
        return MinimalCheck(False, reasons)
    if D.vertex_map is None:
        return MinimalCheck(False, ["no vertex map"])
    low = [u for u in D.interior_vertices if D.angles[u] < k]
    if low:
        reasons.append("interior vertex in < k triangles")
    vm = D.vertex_map
    if any(len({vm[u] for u in t}) < 3 for t in D.triangles):
        reasons.append("degenerate map")
    return MinimalCheck(not reasons, reasons)


def embedded_cycles(X: Complex, max_len: int) -> list[tuple[int, ...]]:
    """All embedded cycles of length 3..max_len in the 1-skeleton, canonically rotated."""
    out = set()
    for c in nx.simple_cycles(X.graph(), length_bound=max_len):
        if len(c) < 3:
            continue
        i = c.index(min(c))
        c = c[i:] + c[:i]
        if c[1] > c[-1]:
            c = [c[0]] + c[1:][::-1]
        out.add(tuple(c))
    return sorted(out, key=lambda c: (len(c), c))


# -- examples and random discs -------------------------------------------


def hexagonal_star() -> DiscDiagram:
    """Six triangles around interior vertex 6; boundary 0..5."""
    return DiscDiagram.make(7, [(i, (i + 1) % 6, 6) for i in range(6)], range(6))


def grow_random_disc(rng: random.Random, steps: int) -> DiscDiagram:
    """Grow a simplicial disc from one triangle by random boundary moves.

    Each move either glues a triangle with a new vertex onto a boundary edge,
    or closes a boundary corner ``u, v, w`` with the triangle ``uvw`` (so
    ``v`` becomes interior) when the edge ``uw`` is new and the boundary stays
    longer than three.
    """
    tris = [(0, 1, 2)]
    cyc = [0, 1, 2]
    edges = {(0, 1), (1, 2), (0, 2)}
    n = 3
    for _ in range(steps):
        L = len(cyc)
        i = rng.randrange(L)
        if L > 3 and rng.random() < 0.45:
            u, v, w = cyc[i - 1], cyc[i], cyc[(i + 1) % L]
            if _edge(u, w) not in edges:
                tris.append(tuple(sorted((u, v, w))))
                edges.add(_edge(u, w))
                cyc.pop(i)
                continue
        u, w = cyc[i], cyc[(i + 1) % L]
        tris.append(tuple(sorted((u, w, n))))
        edges.update({_edge(u, n), _edge(w, n)})
        cyc.insert(i + 1, n)
        n += 1
    return DiscDiagram.make(n, tris, cyc)
