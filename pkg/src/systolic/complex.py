"""Finite abstract simplicial complexes given by their maximal faces.

A :class:`Complex` is immutable.  Complexes produced by :func:`build_complex`
and the generators use dense vertex labels ``0..n-1``; subcomplexes returned
by :func:`span`, :func:`residue` and the metric balls keep the labels of the
parent complex, so they can be compared with each other directly.  Links are
the exception: they are re-indexed and come with an explicit vertex map.
"""

from __future__ import annotations

import json
from functools import cached_property
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

import networkx as nx
import numpy as np

from .errors import EmptyInput, MalformedSimplex, NotAFace, SelfLoop, UnknownVertex

Simplex = tuple[int, ...]


def simplex(vertices: Iterable[int]) -> Simplex:
    """Return the canonical (sorted, duplicate-free) form of a vertex list."""
    vs = [int(v) for v in vertices]
    if not vs:
        raise MalformedSimplex("a simplex needs at least one vertex")
    if any(v < 0 for v in vs):
        raise MalformedSimplex(f"negative vertex id in {vs}")
    out = tuple(sorted(vs))
    if len(set(out)) != len(out):
        raise MalformedSimplex(f"duplicate vertex in {vs}")
    return out


def _reduce_to_maximal(faces: Iterable[Simplex]) -> list[Simplex]:
    by_size = sorted(set(faces), key=lambda f: (-len(f), f))
    kept: list[Simplex] = []
    kept_sets: list[frozenset[int]] = []
    containing: dict[int, list[int]] = {}
    for f in by_size:
        fs = frozenset(f)
        pivot = min(f, key=lambda v: len(containing.get(v, ())))
        if any(fs <= kept_sets[i] for i in containing.get(pivot, ())):
            continue
        idx = len(kept)
        kept.append(f)
        kept_sets.append(fs)
        for v in f:
            containing.setdefault(v, []).append(idx)
    kept.sort()
    return kept


class Complex:
    """An immutable finite simplicial complex.

    Faces are stored as the antichain of maximal faces; every other query
    (adjacency, face membership, CSR arrays, distances) is derived lazily and
    cached.
    """

    def __init__(self, facets: Sequence[Simplex]):
        # callers guarantee canonical, antichain input; use Complex.from_faces otherwise
        self.facets: tuple[Simplex, ...] = tuple(facets)
        self._facet_sets = tuple(frozenset(f) for f in self.facets)
        vf: dict[int, list[int]] = {}
        for i, f in enumerate(self.facets):
            for v in f:
                vf.setdefault(v, []).append(i)
        self._vertex_facets = {v: tuple(ix) for v, ix in vf.items()}

    @classmethod
    def from_faces(cls, faces: Iterable[Iterable[int]]) -> "Complex":
        """Build from any collection of faces; non-maximal ones are absorbed."""
        return cls(_reduce_to_maximal(simplex(f) for f in faces))

    @classmethod
    def empty(cls) -> "Complex":
        return cls(())

    # -- basic structure -------------------------------------------------

    @property
    def maximal_faces(self) -> frozenset[Simplex]:
        return frozenset(self.facets)

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self._vertex_facets))

    @property
    def vertex_count(self) -> int:
        return len(self._vertex_facets)

    @cached_property
    def label_space(self) -> int:
        """One more than the largest vertex label (0 for the empty complex)."""
        return (max(self._vertex_facets) + 1) if self._vertex_facets else 0

    @property
    def is_empty(self) -> bool:
        return not self.facets

    @property
    def dimension(self) -> int:
        return max((len(f) - 1 for f in self.facets), default=-1)

    def has_vertex(self, v: int) -> bool:
        return v in self._vertex_facets

    def check_vertex(self, v: int) -> None:
        if v not in self._vertex_facets:
            raise UnknownVertex(f"vertex {v} is not in the complex")

    def facets_containing(self, sigma: Simplex) -> list[Simplex]:
        if not sigma:
            return list(self.facets)
        for v in sigma:
            if v not in self._vertex_facets:
                return []
        pivot = min(sigma, key=lambda v: len(self._vertex_facets[v]))
        s = frozenset(sigma)
        return [self.facets[i] for i in self._vertex_facets[pivot] if s <= self._facet_sets[i]]

    def is_face(self, sigma: Iterable[int]) -> bool:
        sigma = tuple(sigma)
        if not sigma:
            return False
        for v in sigma:
            if v not in self._vertex_facets:
                return False
        pivot = min(sigma, key=lambda v: len(self._vertex_facets[v]))
        s = frozenset(sigma)
        return any(s <= self._facet_sets[i] for i in self._vertex_facets[pivot])

    def require_face(self, sigma: Iterable[int]) -> Simplex:
        s = simplex(sigma)
        if not self.is_face(s):
            raise NotAFace(f"{list(s)} is not a face of the complex")
        return s

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        nbrs: dict[int, set[int]] = {v: set() for v in self._vertex_facets}
        for f in self.facets:
            for v in f:
                nbrs[v].update(f)
        for v, ns in nbrs.items():
            ns.discard(v)
        return {v: frozenset(ns) for v, ns in nbrs.items()}

    def neighbors(self, v: int) -> frozenset[int]:
        self.check_vertex(v)
        return self.adjacency[v]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self.adjacency.get(u, ())

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted((u, v) for u, ns in self.adjacency.items() for v in ns if u < v))

    @cached_property
    def all_faces(self) -> frozenset[Simplex]:
        out: set[Simplex] = set()
        for f in self.facets:
            for r in range(1, len(f) + 1):
                out.update(combinations(f, r))
        return frozenset(out)

    def faces_of_dim(self, d: int) -> list[Simplex]:
        return sorted(f for f in self.all_faces if len(f) == d + 1)

    def f_vector(self) -> list[int]:
        counts = [0] * (self.dimension + 1)
        for f in self.all_faces:
            counts[len(f) - 1] += 1
        return counts

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.f_vector()))

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency in CSR form over ``range(label_space)``, neighbours sorted."""
        n = self.label_space
        indptr = np.zeros(n + 1, dtype=np.int32)
        rows = []
        for v in range(n):
            ns = sorted(self.adjacency.get(v, ()))
            rows.append(ns)
            indptr[v + 1] = indptr[v] + len(ns)
        indices = np.fromiter((u for ns in rows for u in ns), dtype=np.int32, count=int(indptr[-1]))
        return indptr, indices

    @cached_property
    def distances(self) -> np.ndarray:
        """All-pairs graph distances over the label space; -1 marks unreachable."""
        from .kernels import all_pairs_distances

        indptr, indices = self.csr
        return all_pairs_distances(indptr, indices)

    # -- equality / serialisation ---------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return self.facets == other.facets

    def __hash__(self) -> int:
        return hash(self.facets)

    def __repr__(self) -> str:
        return f"Complex(vertices={self.vertex_count}, maximal_faces={len(self.facets)}, dim={self.dimension})"

    def to_dict(self) -> dict:
        d: dict = {"vertex_count": self.vertex_count, "maximal_faces": [list(f) for f in self.facets]}
        if self.vertices != tuple(range(self.vertex_count)):
            d["vertices"] = list(self.vertices)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "Complex":
        faces = d.get("maximal_faces")
        if not faces:
            raise EmptyInput("complex JSON has no maximal faces")
        if "vertices" in d:
            X = cls.from_faces(faces)
            if list(X.vertices) != sorted(d["vertices"]):
                raise MalformedSimplex("'vertices' does not match the vertices used by the faces")
            return X
        return build_complex(faces, vertex_count=d.get("vertex_count"))

    @classmethod
    def from_json(cls, text: str) -> "Complex":
        return cls.from_dict(json.loads(text))


def build_complex(maximal_faces: Iterable[Iterable[int]], vertex_count: int | None = None) -> Complex:
    """Build a complex with dense vertex labels from a list of faces.

    Redundant (non-maximal) faces are absorbed.  Raises :class:`EmptyInput`
    on an empty list and :class:`MalformedSimplex` on duplicate vertices or
    when the labels are not exactly ``0..vertex_count-1``.
    """
    faces = [simplex(f) for f in maximal_faces]
    if not faces:
        raise EmptyInput("no faces given")
    X = Complex(_reduce_to_maximal(faces))
    n = X.vertex_count if vertex_count is None else int(vertex_count)
    if X.vertices != tuple(range(n)):
        missing = sorted(set(range(n)) - set(X.vertices))
        extra = sorted(set(X.vertices) - set(range(n)))
        raise MalformedSimplex(f"vertex labels must be dense in [0, {n}); missing {missing[:5]}, out of range {extra[:5]}")
    return X


def maximal_cliques(vertex_count: int, edges: Iterable[tuple[int, int]], max_size: int | None = None) -> list[Simplex]:
    g = nx.Graph()
    g.add_nodes_from(range(vertex_count))
    for u, v in edges:
        if u == v:
            raise SelfLoop(f"edge ({u}, {v}) is a loop")
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise UnknownVertex(f"edge ({u}, {v}) leaves [0, {vertex_count})")
        g.add_edge(u, v)
    out = []
    for c in nx.find_cliques(g):
        if max_size is not None and len(c) > max_size:
            raise ValueError(f"clique of size {len(c)} exceeds cap {max_size}")
        out.append(tuple(sorted(c)))
    return sorted(out)


def flag_complex_of_graph(vertex_count: int, edges: Iterable[tuple[int, int]], max_clique_size: int | None = None) -> Complex:
    """The flag (clique) complex of a simple graph on ``range(vertex_count)``."""
    cliques = maximal_cliques(vertex_count, edges, max_clique_size)
    if not cliques:
        raise EmptyInput("graph has no vertices")
    return Complex(cliques)


class Link(NamedTuple):
    complex: Complex
    vertex_map: tuple[int, ...]  # link label -> label in the parent complex


def link(X: Complex, v: int) -> Link:
    X.check_vertex(v)
    nbrs = sorted(X.adjacency[v])
    index = {u: i for i, u in enumerate(nbrs)}
    faces = []
    for f in X.facets_containing((v,)):
        rest = [index[u] for u in f if u != v]
        if rest:
            faces.append(tuple(rest))
    return Link(Complex(_reduce_to_maximal(faces)), tuple(nbrs))


def residue(X: Complex, sigma: Iterable[int]) -> Complex:
    """Subcomplex made of all faces containing ``sigma`` together with their faces."""
    s = X.require_face(sigma)
    return Complex(sorted(X.facets_containing(s)))


def span(X: Complex, S: Iterable[int]) -> Complex:
    """The full subcomplex of ``X`` induced on the vertex set ``S``."""
    S = set(S)
    for v in S:
        X.check_vertex(v)
    faces = []
    seen: set[int] = set()
    for v in S:
        for i in X._vertex_facets[v]:
            if i in seen:
                continue
            seen.add(i)
            part = tuple(u for u in X.facets[i] if u in S)
            faces.append(part)
    return Complex(_reduce_to_maximal(faces))


class FlagCheck(NamedTuple):
    is_flag: bool
    witness: Simplex | None  # a minimal clique that is not a face


def is_flag(X: Complex) -> FlagCheck:
    if X.is_empty:
        return FlagCheck(True, None)
    for clique in maximal_cliques(X.label_space, X.edges):
        if len(clique) < 3 or X.is_face(clique):
            continue
        for size in range(3, len(clique) + 1):
            for sub in combinations(clique, size):
                if not X.is_face(sub):
                    return FlagCheck(False, sub)
    return FlagCheck(True, None)
