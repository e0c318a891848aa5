"""Path metric on the 1-skeleton: distances, balls, spheres, geodesics, thinness.

Thinness is measured at vertex level.  For a vertex ``x`` and endpoints
``a, b`` let ``F(x)`` be the largest possible distance from ``x`` to a
geodesic ``a -> b`` (distance to a path = minimum over its vertices).  Then

* bigon thinness of ``(a, b)`` is ``max F(x)`` over ``x`` on some geodesic;
* triangle thinness of ``(a, b, c)`` is the maximum over sides ``i`` and
  ``x`` on some geodesic of side ``i`` of ``min(F_j(x), F_k(x))``.

``F`` is a bottleneck (maximin) path problem on the geodesic interval, so it
is computed exactly without enumerating geodesics (see :mod:`.kernels`).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import kernels
from .complex import Complex, span
from .errors import CapExceeded, NotGeodesic

DEFAULT_CAP = 10**4


@dataclass(frozen=True)
class DistanceField:
    source: int
    dist: np.ndarray = field(repr=False)  # indexed by label; -1 = unreachable or not a vertex

    def __getitem__(self, v: int) -> float:
        d = int(self.dist[v])
        return math.inf if d < 0 else d

    def reachable(self, v: int) -> bool:
        return bool(self.dist[v] >= 0)

    @property
    def eccentricity(self) -> float:
        if (self.dist < 0).any():
            return math.inf
        return int(self.dist.max())


def bfs_distance(X: Complex, source: int) -> DistanceField:
    X.check_vertex(source)
    indptr, indices = X.csr
    dist = kernels.bfs(indptr, indices, source)
    # labels missing from X stay -1, so eccentricity must only look at real vertices
    verts = np.asarray(X.vertices)
    out = np.full(len(dist), -1, dtype=np.int32)
    out[verts] = dist[verts]
    return DistanceField(source, out)


def distance(X: Complex, u: int, v: int) -> float:
    X.check_vertex(u)
    X.check_vertex(v)
    d = int(X.distances[u, v])
    return math.inf if d < 0 else d


def sphere_vertices(X: Complex, v0: int, n: int) -> list[int]:
    X.check_vertex(v0)
    row = X.distances[v0]
    return [v for v in X.vertices if row[v] == n]


def ball_vertices(X: Complex, v0: int, n: int) -> list[int]:
    X.check_vertex(v0)
    row = X.distances[v0]
    return [v for v in X.vertices if 0 <= row[v] <= n]


def combinatorial_ball(X: Complex, v0: int, n: int) -> Complex:
    """Full subcomplex on the vertices at distance at most ``n`` from ``v0``."""
    if n < 0:
        raise ValueError("radius must be >= 0")
    return span(X, ball_vertices(X, v0, n))


def combinatorial_sphere(X: Complex, v0: int, n: int) -> Complex:
    """Full subcomplex on the vertices at distance exactly ``n``; may be empty."""
    if n < 0:
        raise ValueError("radius must be >= 0")
    return span(X, sphere_vertices(X, v0, n))


# -- geodesics -----------------------------------------------------------


class Geodesics(NamedTuple):
    paths: list[tuple[int, ...]]
    truncated: bool


def is_geodesic(X: Complex, path: Sequence[int]) -> bool:
    if not path:
        return False
    D = X.distances
    if any(not X.adjacent(u, v) for u, v in zip(path, path[1:])):
        return False
    return int(D[path[0], path[-1]]) == len(path) - 1


def enumerate_geodesics(X: Complex, u: int, v: int, cap: int = DEFAULT_CAP, strict: bool = False) -> Geodesics:
    """All geodesic vertex paths ``u -> v`` in lexicographic order, at most ``cap``.

    ``truncated`` is set when more exist; with ``strict`` a
    :class:`CapExceeded` is raised instead.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    X.check_vertex(u)
    X.check_vertex(v)
    D = X.distances
    d = int(D[u, v])
    if d < 0:
        return Geodesics([], False)
    out: list[tuple[int, ...]] = []
    path = [u]
    truncated = False

    def walk(w: int) -> bool:
        nonlocal truncated
        if w == v:
            if len(out) == cap:
                truncated = True
                return False
            out.append(tuple(path))
            return True
        rest = int(D[w, v]) - 1
        for x in sorted(X.adjacency[w]):
            if D[x, v] == rest:
                path.append(x)
                ok = walk(x)
                path.pop()
                if not ok:
                    return False
        return True

    walk(u)
    if truncated and strict:
        raise CapExceeded(f"more than {cap} geodesics between {u} and {v}")
    return Geodesics(out, truncated)


def geodesic_interval(X: Complex, a: int, b: int) -> list[int]:
    """Vertices lying on some geodesic ``a -> b``, layer by layer from ``a``."""
    indptr, indices = X.csr
    return [int(w) for w in kernels.geodesic_interval(indptr, indices, X.distances, a, b)]


def count_geodesics(X: Complex, a: int, b: int) -> int:
    D = X.distances
    counts = {a: 1}
    for w in geodesic_interval(X, a, b)[1:]:
        counts[w] = sum(counts.get(p, 0) for p in X.adjacency[w] if D[a, p] == D[a, w] - 1)
    return counts.get(b, 0)


def _first_geodesic(X: Complex, a: int, b: int) -> list[int]:
    D = X.distances
    path = [a]
    while path[-1] != b:
        w = path[-1]
        path.append(min(x for x in X.adjacency[w] if D[x, b] == D[w, b] - 1))
    return path


def _through(X: Complex, a: int, x: int, b: int) -> list[int]:
    return _first_geodesic(X, a, x) + _first_geodesic(X, x, b)[1:]


def farthest_geodesic(X: Complex, a: int, b: int, x: int) -> tuple[int, list[int]]:
    """A geodesic ``a -> b`` maximising its distance from ``x``, with that distance.

    Ties are broken towards the lexicographically least predecessor while
    walking back from ``b``.
    """
    D = X.distances
    interval = geodesic_interval(X, a, b)
    if not interval:
        raise NotGeodesic(f"{a} and {b} are in different components")
    best = {a: int(D[x, a])}
    for w in interval[1:]:
        acc = max(best[p] for p in X.adjacency[w] if p in best and D[a, p] == D[a, w] - 1)
        best[w] = min(int(D[x, w]), acc)
    value = best[b]
    path = [b]
    while path[-1] != a:
        w = path[-1]
        path.append(min(p for p in X.adjacency[w] if p in best and D[a, p] == D[a, w] - 1 and best[p] >= value))
    return value, path[::-1]


def path_distance(X: Complex, x: int, path: Iterable[int]) -> int:
    D = X.distances
    return min(int(D[x, w]) for w in path)


@dataclass(frozen=True)
class ThinnessReport:
    endpoints: tuple[int, ...]
    thinness: int
    witness: int  # vertex realising the value
    witness_side: int  # index into ``sides``
    sides: tuple[tuple[int, ...], ...]  # geodesics realising the value
    geodesic_counts: tuple[int, ...]  # number of geodesics per side (exact)
    method: str = "interval-dp"
    bound: int | None = None

    @property
    def within_bound(self) -> bool | None:
        return None if self.bound is None else self.thinness <= self.bound

    def to_dict(self) -> dict:
        return {
            "endpoints": list(self.endpoints),
            "thinness": self.thinness,
            "witness": self.witness,
            "witness_side": self.witness_side,
            "sides": [list(s) for s in self.sides],
            "geodesic_counts": list(self.geodesic_counts),
            "method": self.method,
            "bound": self.bound,
            "within_bound": self.within_bound,
        }


def _connected(X: Complex, *vs: int) -> None:
    for v in vs:
        X.check_vertex(v)
    D = X.distances
    for u, v in combinations(vs, 2):
        if D[u, v] < 0:
            raise NotGeodesic(f"{u} and {v} are in different components")


def bigon_thinness(X: Complex, u: int, v: int, bound: int | None = None) -> ThinnessReport:
    """Largest vertex-level thinness over all pairs of geodesics ``u -> v``."""
    if u == v:
        raise ValueError("bigon endpoints must differ")
    _connected(X, u, v)
    indptr, indices = X.csr
    t, x = kernels.bigon_thinness(indptr, indices, X.distances, u, v)
    value, far = farthest_geodesic(X, u, v, x)
    assert value == t
    sides = (tuple(_through(X, u, x, v)), tuple(far))
    n = count_geodesics(X, u, v)
    return ThinnessReport((u, v), int(t), int(x), 0, sides, (n, n), bound=bound)


def triangle_thinness(X: Complex, a: int, b: int, c: int, bound: int | None = None) -> ThinnessReport:
    """Largest vertex-level thinness over all geodesic triangles on ``a, b, c``."""
    _connected(X, a, b, c)
    indptr, indices = X.csr
    t, s, x = kernels.triangle_thinness(indptr, indices, X.distances, a, b, c)
    ends = ((a, b), (b, c), (c, a))
    sides: list[tuple[int, ...]] = [()] * 3
    sides[s] = tuple(_through(X, ends[s][0], x, ends[s][1]))
    for j in ((s + 1) % 3, (s + 2) % 3):
        sides[j] = tuple(farthest_geodesic(X, *ends[j], x)[1])
    counts = tuple(count_geodesics(X, p, q) for p, q in ends)
    return ThinnessReport((a, b, c), int(t), int(x), int(s), tuple(sides), counts, bound=bound)


def brute_bigon_thinness(X: Complex, u: int, v: int, cap: int = DEFAULT_CAP) -> int:
    """Thinness by enumerating every pair of geodesics (test oracle)."""
    paths = enumerate_geodesics(X, u, v, cap, strict=True).paths
    D = X.distances
    best = 0
    for p in paths:
        for q in paths:
            best = max(best, max(min(int(D[x, w]) for w in q) for x in p))
    return best


def brute_triangle_thinness(X: Complex, a: int, b: int, c: int, cap: int = DEFAULT_CAP) -> int:
    D = X.distances
    sides = [enumerate_geodesics(X, p, q, cap, strict=True).paths for p, q in ((a, b), (b, c), (c, a))]
    best = 0
    for g0 in sides[0]:
        for g1 in sides[1]:
            for g2 in sides[2]:
                tri = (g0, g1, g2)
                for i in range(3):
                    others = tri[(i + 1) % 3] + tri[(i + 2) % 3]
                    for x in tri[i]:
                        best = max(best, min(int(D[x, w]) for w in others))
    return best


# -- exhaustive scans ----------------------------------------------------


class ScanResult(NamedTuple):
    thinness: int
    endpoints: tuple[int, ...]
    count: int  # number of pairs / triples scanned


def _bigon_chunk(args):
    X, verts, rows = args
    indptr, indices = X.csr
    D = X.distances
    best = (-1, ())
    for i in rows:
        for j in range(i + 1, len(verts)):
            t, _ = kernels.bigon_thinness(indptr, indices, D, verts[i], verts[j])
            if t > best[0]:
                best = (t, (verts[i], verts[j]))
    return best


def _triangle_chunk(args):
    X, verts, rows = args
    indptr, indices = X.csr
    D = X.distances
    best = (-1, ())
    m = len(verts)
    for i in rows:
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                t, _, _ = kernels.triangle_thinness(indptr, indices, D, verts[i], verts[j], verts[k])
                if t > best[0]:
                    best = (t, (verts[i], verts[j], verts[k]))
    return best


def _parallel(fn, X: Complex, verts: list[int], jobs: int):
    _ = (X.distances, X.csr)  # computed once before pickling
    chunks = [(X, verts, range(i, len(verts), jobs)) for i in range(jobs)]
    # interleaved rows balance the triangular work; ties resolve to the earliest tuple
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(fn, chunks))
    top = max(r[0] for r in results)
    return top, min(r[1] for r in results if r[0] == top) if top >= 0 else ()


def _resolve_jobs(jobs: int | None) -> int:
    if jobs is None or jobs < 1:
        return os.cpu_count() or 1
    return jobs


def scan_bigon_thinness(X: Complex, vertices: Iterable[int], jobs: int = 1) -> ScanResult:
    """Maximum bigon thinness over all unordered pairs of ``vertices``."""
    verts = sorted(set(vertices))
    for v in verts:
        X.check_vertex(v)
    n = len(verts) * (len(verts) - 1) // 2
    jobs = _resolve_jobs(jobs)
    if jobs == 1:
        indptr, indices = X.csr
        t, a, b = kernels.scan_bigons(indptr, indices, X.distances, verts)
        return ScanResult(int(t), (int(a), int(b)) if t >= 0 else (), n)
    t, ends = _parallel(_bigon_chunk, X, verts, jobs)
    return ScanResult(int(t), tuple(int(v) for v in ends), n)


def scan_triangle_thinness(X: Complex, vertices: Iterable[int], jobs: int = 1) -> ScanResult:
    """Maximum triangle thinness over all unordered triples of ``vertices``."""
    verts = sorted(set(vertices))
    for v in verts:
        X.check_vertex(v)
    m = len(verts)
    n = m * (m - 1) * (m - 2) // 6
    jobs = _resolve_jobs(jobs)
    if jobs == 1:
        indptr, indices = X.csr
        t, a, b, c = kernels.scan_triangles(indptr, indices, X.distances, verts)
        return ScanResult(int(t), (int(a), int(b), int(c)) if t >= 0 else (), n)
    t, ends = _parallel(_triangle_chunk, X, verts, jobs)
    return ScanResult(int(t), tuple(int(v) for v in ends), n)


# -- bigon lemmas --------------------------------------------------------


class FirstStep(NamedTuple):
    distance: int
    steps: tuple[int, int]
    ok: bool


def _require_geodesic(X: Complex, path: Sequence[int]) -> None:
    if not is_geodesic(X, path):
        raise NotGeodesic(f"{list(path)} is not a geodesic")


def check_bigon_first_step(X: Complex, g1: Sequence[int], g2: Sequence[int]) -> FirstStep:
    """Distance between the second vertices of two geodesics with equal endpoints."""
    _require_geodesic(X, g1)
    _require_geodesic(X, g2)
    if g1[0] != g2[0] or g1[-1] != g2[-1]:
        raise ValueError("the two geodesics must share both endpoints")
    if len(g1) < 2:
        raise ValueError("geodesics must have length >= 1")
    d = int(X.distances[g1[1], g2[1]])
    return FirstStep(d, (g1[1], g2[1]), d <= 1)


class EndpointCase(NamedTuple):
    case: str  # "a", "b", "c" or "violation"
    distance: int
    steps: tuple[int, int]
    middle: int | None


def classify_adjacent_endpoints(X: Complex, v0: int, v1: int, v2: int, w1: int, w2: int) -> EndpointCase:
    """Classify first steps ``w1`` (of a geodesic ``v1 -> v0``) and ``w2``."""
    D = X.distances
    d = int(D[w1, w2])
    if d == 0:
        return EndpointCase("a", 0, (w1, w2), None)
    if d == 1:
        return EndpointCase("b", 1, (w1, w2), None)
    if d == 2:
        n = int(D[v0, v1])
        for v in sorted(X.adjacency[w1] & X.adjacency[w2]):
            if D[v0, v] == n - 1 and X.adjacent(v, v1) and X.adjacent(v, v2):
                return EndpointCase("c", 2, (w1, w2), v)
    return EndpointCase("violation", d, (w1, w2), None)


def first_steps(X: Complex, v: int, v0: int) -> list[int]:
    D = X.distances
    d = int(D[v, v0])
    return sorted(w for w in X.adjacency[v] if D[w, v0] == d - 1)


def check_adjacent_endpoints_lemma(X: Complex, v0: int, v1: int, v2: int) -> list[EndpointCase]:
    """Classify every pair of geodesics ``v1 -> v0``, ``v2 -> v0``.

    The classification only depends on the first steps, and every first step
    extends to a geodesic, so iterating over first-step pairs covers all
    geodesic pairs.
    """
    D = X.distances
    for v in (v0, v1, v2):
        X.check_vertex(v)
    if not X.adjacent(v1, v2):
        raise ValueError(f"{v1} and {v2} are not adjacent")
    n = int(D[v0, v1])
    if n < 1 or n != D[v0, v2]:
        raise ValueError(f"{v1} and {v2} must lie on a common sphere S_n({v0}) with n >= 1")
    return [
        classify_adjacent_endpoints(X, v0, v1, v2, w1, w2)
        for w1 in first_steps(X, v1, v0)
        for w2 in first_steps(X, v2, v0)
    ]


class LemmaScan(NamedTuple):
    checked: int
    violations: list
    counts: dict


def scan_bigon_first_step(X: Complex, bases: Iterable[int] | None = None, cap: int = DEFAULT_CAP) -> LemmaScan:
    """Run :func:`check_bigon_first_step` on every geodesic bigon ending at each base."""
    bases = X.vertices if bases is None else bases
    D = X.distances
    checked = 0
    bad = []
    counts: dict[int, int] = {}
    for v0 in bases:
        for v in X.vertices:
            if v == v0 or D[v, v0] < 0:
                continue
            paths = enumerate_geodesics(X, v, v0, cap, strict=True).paths
            for g1, g2 in combinations(paths, 2):
                r = check_bigon_first_step(X, g1, g2)
                checked += 1
                counts[r.distance] = counts.get(r.distance, 0) + 1
                if not r.ok:
                    bad.append((g1, g2, r))
    return LemmaScan(checked, bad, counts)


def scan_adjacent_endpoints(X: Complex, bases: Iterable[int] | None = None, radii: Iterable[int] | None = None) -> LemmaScan:
    bases = X.vertices if bases is None else bases
    radii = None if radii is None else set(radii)
    D = X.distances
    checked = 0
    bad = []
    counts: dict[str, int] = {}
    for v0 in bases:
        row = D[v0]
        for v1, v2 in X.edges:
            n = int(row[v1])
            if n < 1 or row[v2] != n or (radii is not None and n not in radii):
                continue
            for r in check_adjacent_endpoints_lemma(X, v0, v1, v2):
                checked += 1
                counts[r.case] = counts.get(r.case, 0) + 1
                if r.case == "violation":
                    bad.append((v0, v1, v2, r))
    return LemmaScan(checked, bad, counts)
