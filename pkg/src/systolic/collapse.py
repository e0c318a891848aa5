"""Elementary collapses and the ball-by-ball contraction to a point.

A face ``sigma`` is free when exactly one maximal face ``tau`` contains it
and ``sigma != tau``.  Collapsing it removes every face containing
``sigma``.  The removal is recorded as a sequence of codimension-one pairs
``(rho, rho + v)`` with ``v`` the least vertex of ``tau - sigma``, ordered by
dimension (largest first) and then lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple

from .complex import Complex, Simplex, simplex
from .errors import NotFree, StuckComplex
from .metric import combinatorial_ball, sphere_vertices
from .projection import project


def _faces_of(tau: Simplex) -> Iterable[Simplex]:
    for r in range(1, len(tau) + 1):
        yield from combinations(tau, r)


def _euler(faces: Iterable[Simplex]) -> int:
    return sum(1 if len(f) % 2 else -1 for f in faces)


def _order(s: Simplex):
    return (-len(s), s)


@dataclass(frozen=True)
class CollapseStep:
    sigma: Simplex
    tau: Simplex
    removed: tuple[Simplex, ...]  # sorted by dimension descending, then lexicographically
    pairs: tuple[tuple[Simplex, Simplex], ...]
    euler_after: int | None = None

    def to_dict(self) -> dict:
        return {
            "sigma": list(self.sigma),
            "tau": list(self.tau),
            "removed": [list(r) for r in self.removed],
            "pairs": [[list(a), list(b)] for a, b in self.pairs],
            "euler_after": self.euler_after,
        }


class _Working:
    """Mutable face set with its maximal faces, used while collapsing."""

    def __init__(self, X: Complex):
        self.maximal: set[Simplex] = set(X.facets)
        self.faces: set[Simplex] = set(X.all_faces)

    def cofaces(self, sigma: Simplex) -> list[Simplex]:
        s = set(sigma)
        return sorted(m for m in self.maximal if s <= set(m))

    def free_coface(self, sigma: Simplex) -> Simplex:
        if sigma not in self.faces:
            raise NotFree(f"{list(sigma)} is not a face of the current complex")
        cof = self.cofaces(sigma)
        if len(cof) != 1:
            raise NotFree(f"{list(sigma)} lies in {len(cof)} maximal faces: {[list(c) for c in cof]}")
        if cof[0] == sigma:
            raise NotFree(f"{list(sigma)} is itself maximal")
        return cof[0]

    def collapse(self, sigma: Simplex) -> CollapseStep:
        tau = self.free_coface(sigma)
        s = set(sigma)
        removed = sorted((f for f in _faces_of(tau) if s <= set(f)), key=_order)
        v = min(set(tau) - s)
        pairs = tuple((r, simplex((*r, v))) for r in removed if v not in r)
        self.faces.difference_update(removed)
        self.maximal.discard(tau)
        for x in sigma:
            c = tuple(u for u in tau if u != x)
            if c and not any(set(c) <= set(m) for m in self.maximal):
                self.maximal.add(c)
        return CollapseStep(sigma, tau, tuple(removed), pairs, _euler(self.faces))

    def complex(self) -> Complex:
        return Complex(sorted(self.maximal))


def elementary_collapse(X: Complex, sigma: Iterable[int]) -> tuple[Complex, CollapseStep]:
    """Remove every face containing the free face ``sigma``."""
    w = _Working(X)
    step = w.collapse(simplex(sigma))
    return w.complex(), step


@dataclass
class CollapseTrace:
    start: Complex
    end: Complex
    steps: list[CollapseStep] = field(default_factory=list)
    stages: int = 0  # number of sweeps over the sphere remainders

    def replay(self) -> Complex:
        """Re-run every step from ``start``, re-checking freeness and removals."""
        w = _Working(self.start)
        for i, st in enumerate(self.steps):
            tau = w.free_coface(st.sigma)
            if tau != st.tau:
                raise NotFree(f"step {i}: {list(st.sigma)} now lies in {list(tau)}, trace says {list(st.tau)}")
            got = w.collapse(st.sigma)
            if got.removed != st.removed:
                raise NotFree(f"step {i}: removal differs from the trace")
        out = w.complex()
        if out != self.end:
            raise NotFree("replay does not end at the recorded complex")
        return out

    @property
    def euler_characteristics(self) -> list[int]:
        return [self.start.euler_characteristic()] + [s.euler_after for s in self.steps]

    def to_dict(self) -> dict:
        return {
            "start": self.start.to_dict(),
            "end": self.end.to_dict(),
            "stages": self.stages,
            "steps": [s.to_dict() for s in self.steps],
        }


class UniqueMaximal(NamedTuple):
    ok: bool
    checked: int
    violations: list  # (sigma, maximal faces found, expected)


def unique_maximal_check(X: Complex, v0: int, n: int) -> UniqueMaximal:
    """Each maximal simplex of S_n lies in exactly one maximal simplex of B_n, namely itself joined to its projection."""
    if n < 1:
        raise ValueError("n must be >= 1")
    B = combinatorial_ball(X, v0, n)
    S = set(sphere_vertices(X, v0, n))
    sphere_faces = [f for f in B.all_faces if set(f) <= S]
    fs = [set(f) for f in sphere_faces]
    maximal = sorted(f for f, s in zip(sphere_faces, fs) if not any(s < t for t in fs))
    bad = []
    for sigma in maximal:
        expected = simplex((*sigma, *project(X, v0, sigma)))
        found = sorted(B.facets_containing(sigma))
        if found != [expected]:
            bad.append((sigma, found, expected))
    return UniqueMaximal(not bad, len(maximal), bad)


def _collapse_sphere(w: _Working, S: set[int], steps: list[CollapseStep]) -> int:
    stages = 0
    while True:
        rem = [f for f in w.faces if set(f) <= S]
        if not rem:
            return stages
        sets = [set(f) for f in rem]
        snapshot = sorted((f for f, s in zip(rem, sets) if not any(s < t for t in sets)), key=_order)
        stages += 1
        for sigma in snapshot:
            if sigma not in w.faces:
                continue
            try:
                steps.append(w.collapse(sigma))
            except NotFree as exc:
                raise StuckComplex(f"sphere simplex {list(sigma)} is not free: {exc}") from None


def collapse_ball_once(X: Complex, v0: int, n: int) -> tuple[Complex, CollapseTrace]:
    """Collapse B_n(v0) onto B_{n-1}(v0) by sweeping the maximal faces of S_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    B = combinatorial_ball(X, v0, n)
    w = _Working(B)
    steps: list[CollapseStep] = []
    stages = _collapse_sphere(w, set(sphere_vertices(X, v0, n)), steps)
    out = w.complex()
    return out, CollapseTrace(B, out, steps, stages)


def collapse_to_point(X: Complex, v0: int, R: int) -> CollapseTrace:
    """Collapse ``X = B_R(v0)`` ball by ball down to the vertex ``v0``."""
    B = combinatorial_ball(X, v0, R)
    if B != X:
        raise ValueError(f"the complex is not its own ball of radius {R} around {v0}")
    w = _Working(X)
    steps: list[CollapseStep] = []
    stages = 0
    for n in range(R, 0, -1):
        stages += _collapse_sphere(w, set(sphere_vertices(X, v0, n)), steps)
    return CollapseTrace(X, w.complex(), steps, stages)
