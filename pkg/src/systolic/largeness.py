"""k-largeness and local k-largeness with explicit witnesses.

Cycles of length 3 never have a diagonal, so the diagonal condition is only
applied to cycles of length >= 4; triangles are handled by flagness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .complex import Complex, Simplex, is_flag, link
from .generators import Provenance


@dataclass(frozen=True)
class LargenessReport:
    k: int
    is_flag: bool
    flag_witness: Simplex | None
    shortest_diagonal_free_cycle: tuple[int, ...] | None

    @property
    def verdict(self) -> bool:
        return self.is_flag and self.shortest_diagonal_free_cycle is None

    def __bool__(self) -> bool:
        return self.verdict

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "is_flag": self.is_flag,
            "flag_witness": None if self.flag_witness is None else list(self.flag_witness),
            "shortest_diagonal_free_cycle": None
            if self.shortest_diagonal_free_cycle is None
            else list(self.shortest_diagonal_free_cycle),
            "verdict": self.verdict,
        }


def _induced_cycles_from(adj: dict[int, frozenset[int]], s: int, max_len: int) -> Iterator[tuple[int, ...]]:
    # Induced paths s = p0, p1, ..., all > s; each cycle is found in both directions,
    # the one with p1 < p_last is kept.
    path = [s]
    on_path = {s}

    def extend() -> Iterator[tuple[int, ...]]:
        last = path[-1]
        for u in sorted(adj[last]):
            if u <= s or u in on_path:
                continue
            inner = path[1:-1]
            if any(u in adj[p] for p in inner):
                continue
            if s in adj[u]:
                if len(path) >= 3 and path[1] < u:
                    yield (*path, u)
                continue
            if len(path) + 1 < max_len:
                path.append(u)
                on_path.add(u)
                yield from extend()
                path.pop()
                on_path.discard(u)

    for p1 in sorted(adj[s]):
        if p1 <= s:
            continue
        path.append(p1)
        on_path.add(p1)
        yield from extend()
        path.pop()
        on_path.discard(p1)


def enumerate_induced_cycles(X: Complex, max_len: int) -> list[tuple[int, ...]]:
    """All diagonal-free cycles of length 4..max_len in the 1-skeleton.

    Each cycle is reported once, rotated to start at its smallest vertex and
    oriented so that the second vertex is smaller than the last.  Sorted by
    length, then lexicographically.
    """
    if max_len < 3:
        raise ValueError("max_len must be >= 3")
    adj = X.adjacency
    out = []
    for s in X.vertices:
        out.extend(_induced_cycles_from(adj, s, max_len))
    out.sort(key=lambda c: (len(c), c))
    return out


def shortest_induced_cycle(X: Complex, max_len: int) -> tuple[int, ...] | None:
    if max_len < 4:
        return None
    adj = X.adjacency
    best = None
    for s in X.vertices:
        for c in _induced_cycles_from(adj, s, max_len):
            if best is None or (len(c), c) < (len(best), best):
                best = c
        if best is not None and len(best) == 4:
            # nothing shorter exists; the lexicographically least 4-cycle starts at the least s
            break
    return best


def is_k_large(X: Complex, k: int) -> LargenessReport:
    if k < 4:
        raise ValueError("k must be >= 4")
    flag = is_flag(X)
    cycle = shortest_induced_cycle(X, k - 1)
    return LargenessReport(k, flag.is_flag, flag.witness, cycle)


@dataclass(frozen=True)
class LocalLargeness:
    k: int
    verdict: bool
    vertex: int | None = None
    link_report: LargenessReport | None = None  # in link labels
    link_witness: tuple[int, ...] | None = None  # the link witness in parent labels

    def __bool__(self) -> bool:
        return self.verdict

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "verdict": self.verdict,
            "vertex": self.vertex,
            "link_report": None if self.link_report is None else self.link_report.to_dict(),
            "link_witness": None if self.link_witness is None else list(self.link_witness),
        }


def is_locally_k_large(X: Complex, k: int) -> LocalLargeness:
    if k < 4:
        raise ValueError("k must be >= 4")
    for v in X.vertices:
        lk, vmap = link(X, v)
        rep = is_k_large(lk, k)
        if not rep.verdict:
            wit = rep.shortest_diagonal_free_cycle or rep.flag_witness
            return LocalLargeness(k, False, v, rep, tuple(vmap[i] for i in wit))
    return LocalLargeness(k, True)


@dataclass(frozen=True)
class LocalToGlobal:
    k: int
    applicable: bool  # hypothesis "simply connected" available from provenance
    local: bool
    global_: bool

    @property
    def holds(self) -> bool:
        return (not self.applicable) or (not self.local) or self.global_

    def __bool__(self) -> bool:
        return self.holds


def local_to_global_check(X: Complex, k: int, provenance: Provenance | None = None, simply_connected: bool | None = None) -> LocalToGlobal:
    """Check "simply connected and locally k-large implies k-large" on ``X``.

    Simple connectivity is taken from ``simply_connected`` or the provenance
    claims; without it the implication is vacuous and reported as not
    applicable, but both largeness checks are still run.
    """
    if k < 6:
        raise ValueError("the local-to-global statement needs k >= 6")
    if simply_connected is None:
        simply_connected = bool(provenance and provenance.simply_connected)
    local = is_locally_k_large(X, k).verdict
    glob = is_k_large(X, k).verdict
    return LocalToGlobal(k, simply_connected, local, glob)
