"""Sphere projections, directed geodesics and the descending P-families.

Chains are stored from the base vertex outward: ``(v0, s1, ..., sn)`` with
``si`` in the sphere of radius ``i``.  The distance from a vertex to a
simplex is the minimum over the simplex's vertices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, NamedTuple, Sequence

from .complex import Complex, Simplex, simplex, span
from .errors import EmptyProjection, EmptySphere, InsufficientOverlap, NonSimplexProjection, NotEquidistant
from .metric import sphere_vertices

DirectedGeodesic = list  # list of Simplex


def _as_face(X: Complex, sigma: Iterable[int]) -> Simplex:
    return X.require_face(sigma)


def ball_1_vertices(X: Complex, sigma: Simplex) -> list[int]:
    D = X.distances
    return [v for v in X.vertices if min(D[v, s] for s in sigma) in (0, 1)]


def simplex_ball_1(X: Complex, sigma: Iterable[int]) -> Complex:
    """Full subcomplex on the vertices within distance 1 of ``sigma``."""
    s = _as_face(X, sigma)
    return span(X, ball_1_vertices(X, s))


def residue_vertices(X: Complex, sigma: Simplex) -> set[int]:
    out: set[int] = set()
    for f in X.facets_containing(sigma):
        out.update(f)
    return out


def level(X: Complex, v0: int, sigma: Simplex) -> int:
    """Common distance of the vertices of ``sigma`` from ``v0``."""
    X.check_vertex(v0)
    D = X.distances
    ds = {int(D[v0, s]) for s in sigma}
    if len(ds) != 1 or -1 in ds:
        raise NotEquidistant(f"vertices of {list(sigma)} lie at distances {sorted(ds)} from {v0}")
    return ds.pop()


def project(X: Complex, v0: int, sigma: Iterable[int]) -> Simplex:
    """The projection of a sphere simplex one step towards ``v0``.

    Raises :class:`EmptyProjection` when no vertex of the next sphere in
    is joined to ``sigma``, and :class:`NonSimplexProjection` when the
    candidates do not span a simplex together with ``sigma``.
    """
    s = _as_face(X, sigma)
    n = level(X, v0, s)
    if n == 0:
        raise NotEquidistant(f"{list(s)} is the base vertex; it has no projection")
    D = X.distances
    image = tuple(sorted(w for w in residue_vertices(X, s) if D[v0, w] == n - 1))
    if not image:
        raise EmptyProjection(f"projection of {list(s)} towards {v0} is empty")
    if not X.is_face(image + s):
        raise NonSimplexProjection(
            f"projection of {list(s)} towards {v0} is {list(image)}, which does not span a simplex with it"
        )
    return image


# -- directed geodesics --------------------------------------------------


class DirectedCheck(NamedTuple):
    ok: bool
    index: int | None = None
    condition: str | None = None  # "face", "i" or "ii"
    detail: str = ""


def verify_directed(X: Complex, g: Sequence[Iterable[int]]) -> DirectedCheck:
    """Check conditions (i) and (ii) of a directed geodesic, reporting the first failure."""
    chain = []
    for i, s in enumerate(g):
        s = simplex(s)
        if not X.is_face(s):
            return DirectedCheck(False, i, "face", f"{list(s)} is not a face")
        chain.append(s)
    for i in range(len(chain) - 1):
        a, b = chain[i], chain[i + 1]
        if set(a) & set(b):
            return DirectedCheck(False, i, "i", f"{list(a)} and {list(b)} intersect")
        if not X.is_face(a + b):
            return DirectedCheck(False, i, "i", f"{list(a)} and {list(b)} do not span a simplex")
    D = X.distances
    for i in range(len(chain) - 2):
        lo, mid, hi = chain[i], chain[i + 1], chain[i + 2]
        got = sorted(w for w in residue_vertices(X, hi) if min(D[w, s] for s in lo) <= 1)
        if tuple(got) != mid:
            return DirectedCheck(False, i, "ii", f"Res({list(hi)}) meets B_1({list(lo)}) in {got}, expected {list(mid)}")
    return DirectedCheck(True)


def directed_geodesic_to(X: Complex, v0: int, sigma: Iterable[int]) -> DirectedGeodesic:
    """The chain of iterated projections ``(v0, ..., sigma)``."""
    s = _as_face(X, sigma)
    n = level(X, v0, s)
    chain = [s]
    for _ in range(n):
        chain.append(project(X, v0, chain[-1]))
    return chain[::-1]


class SelectionCheck(NamedTuple):
    ok: bool
    checked: int
    witness: tuple[int, ...] | None


def vertex_selections_are_geodesics(X: Complex, g: Sequence[Iterable[int]]) -> SelectionCheck:
    """Check every choice of one vertex per simplex is a geodesic of the 1-skeleton."""
    D = X.distances
    count = 0
    for sel in product(*(simplex(s) for s in g)):
        count += 1
        if any(not X.adjacent(u, v) for u, v in zip(sel, sel[1:])) or D[sel[0], sel[-1]] != len(sel) - 1:
            return SelectionCheck(False, count, sel)
    return SelectionCheck(True, count, None)


def is_projection_chain(X: Complex, g: Sequence[Iterable[int]]) -> bool:
    """Whether ``g`` starts at a vertex and each simplex projects onto its predecessor."""
    chain = [simplex(s) for s in g]
    if not chain or len(chain[0]) != 1:
        return False
    v0 = chain[0][0]
    try:
        for i in range(1, len(chain)):
            if level(X, v0, chain[i]) != i or project(X, v0, chain[i]) != chain[i - 1]:
                return False
    except (NotEquidistant, EmptyProjection, NonSimplexProjection):
        return False
    return True


def next_candidates(X: Complex, chain: Sequence[Simplex]) -> list[Simplex]:
    """Simplices that extend ``chain`` keeping both conditions, in sorted order."""
    last = chain[-1]
    found: set[Simplex] = set()
    for f in X.facets_containing(last):
        rest = [v for v in f if v not in last]
        for mask in range(1, 1 << len(rest)):
            found.add(tuple(v for j, v in enumerate(rest) if mask >> j & 1))
    out = []
    for t in sorted(found):
        if len(chain) < 2 or verify_directed(X, [chain[-2], last, t]).ok:
            out.append(t)
    return out


def enumerate_directed_chains(X: Complex, v0: int, length: int) -> list[list[Simplex]]:
    """All directed geodesics ``(v0, s1, ..., s_length)``.

    Both conditions only involve consecutive pairs and triples, so every
    prefix of a directed geodesic is one, which makes a depth-first search
    with per-step checks exhaustive.
    """
    X.check_vertex(v0)
    out = []
    chain: list[Simplex] = [(v0,)]

    def grow():
        if len(chain) == length + 1:
            out.append(list(chain))
            return
        for t in next_candidates(X, chain):
            chain.append(t)
            grow()
            chain.pop()

    grow()
    return out


def concatenation_check(X: Complex, g1: Sequence[Iterable[int]], g2: Sequence[Iterable[int]]) -> DirectedCheck:
    """Splice two directed geodesics sharing three simplices and verify the result."""
    a = [simplex(s) for s in g1]
    b = [simplex(s) for s in g2]
    if len(a) < 3 or len(b) < 3 or a[-3:] != b[:3]:
        raise InsufficientOverlap("the last three simplices of g1 must equal the first three of g2")
    return verify_directed(X, a + b[3:])


def random_directed_extension(X: Complex, chain: Sequence[Simplex], steps: int, rng: random.Random) -> list[Simplex] | None:
    """Extend ``chain`` by ``steps`` random directed steps, or ``None`` if stuck."""
    out = list(chain)
    for _ in range(steps):
        cands = next_candidates(X, out)
        if not cands:
            return None
        out.append(rng.choice(cands))
    return out


# -- P-families ----------------------------------------------------------


@dataclass
class PFamily:
    v0: int
    m: int
    horizon: int
    sets: dict[int, list[Simplex]] = field(default_factory=dict)  # n -> P(m, n)
    chosen: list[Simplex] = field(default_factory=list)  # s_1, ..., s_{m-1}

    @property
    def descending(self) -> bool:
        ns = sorted(self.sets)
        return all(set(self.sets[b]) <= set(self.sets[a]) for a, b in zip(ns, ns[1:]))

    @property
    def nonempty(self) -> bool:
        return all(self.sets.values())

    @property
    def stable_from(self) -> int:
        """Smallest N with P(m, n) = P(m, horizon) for all N <= n <= horizon."""
        last = self.sets[self.horizon]
        N = self.horizon
        while N - 1 in self.sets and self.sets[N - 1] == last:
            N -= 1
        return N

    @property
    def stabilized(self) -> bool:
        return self.stable_from < self.horizon

    def to_dict(self) -> dict:
        return {
            "v0": self.v0,
            "m": self.m,
            "horizon": self.horizon,
            "sets": {str(n): [list(s) for s in ss] for n, ss in sorted(self.sets.items())},
            "chosen": [list(s) for s in self.chosen],
            "descending": self.descending,
            "nonempty": self.nonempty,
            "stable_from": self.stable_from,
            "stabilized": self.stabilized,
        }


def sphere_simplices(X: Complex, v0: int, n: int) -> list[Simplex]:
    S = span(X, sphere_vertices(X, v0, n))
    return sorted(S.all_faces)


def p_family(X: Complex, v0: int, m: int, horizon: int) -> PFamily:
    """The sets P(m, n), m < n <= horizon, of iterated projections landing in S_m.

    For m > 1 the earlier choices s_1, ..., s_{m-1} are made level by level,
    each the lexicographically least member of P(j, horizon).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if horizon <= m:
        raise ValueError("horizon must exceed m")
    X.check_vertex(v0)
    for n in range(horizon + 1):
        if not sphere_vertices(X, v0, n):
            raise EmptySphere(f"sphere S_{n}({v0}) is empty")

    cache: dict[Simplex, Simplex] = {}

    def proj(s):
        if s not in cache:
            cache[s] = project(X, v0, s)
        return cache[s]

    # rows[n]: for each simplex of S_n, its iterated projections indexed by level - 1
    rows: dict[int, list[list[Simplex]]] = {}
    for n in range(2, horizon + 1):
        out = []
        for s in sphere_simplices(X, v0, n):
            chain = [s]
            while len(chain) < n:
                chain.append(proj(chain[-1]))
            out.append(chain[::-1])
        rows[n] = out

    chosen: list[Simplex] = []
    fam = PFamily(v0, m, horizon)
    for j in range(1, m + 1):
        sets = {
            n: sorted({r[j - 1] for r in rows[n] if j == 1 or r[j - 2] == chosen[-1]})
            for n in range(j + 1, horizon + 1)
        }
        if j < m and sets[horizon]:
            chosen.append(sets[horizon][0])
            continue
        # at level m, or stuck earlier: report the (possibly empty) level-m sets
        fam.sets = sets if j == m else {n: [] for n in range(m + 1, horizon + 1)}
        break
    fam.chosen = chosen
    return fam
