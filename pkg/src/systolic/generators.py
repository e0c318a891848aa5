"""Deterministic constructors for example complexes.

Each generator returns the complex together with a :class:`Provenance`
record listing the properties it is built to have.  Downstream code uses
these claims for hypotheses that cannot be decided on a finite input (simple
connectivity); everything else can be re-checked with :func:`verify_provenance`.
"""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

from .complex import Complex, build_complex, flag_complex_of_graph
from .errors import TooSmall


@dataclass(frozen=True)
class Provenance:
    name: str
    params: dict = field(default_factory=dict)
    claims: tuple[str, ...] = ()
    refutes: tuple[str, ...] = ()

    def claims_flag(self, flag: str) -> bool:
        return flag in self.claims

    @property
    def simply_connected(self) -> bool:
        return "simply_connected" in self.claims

    def systolic_k(self) -> int | None:
        for c in self.claims:
            m = re.fullmatch(r"systolic\((\d+)\)", c)
            if m:
                return int(m.group(1))
        return None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["claims"] = list(self.claims)
        d["refutes"] = list(self.refutes)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Provenance":
        return cls(d["name"], dict(d.get("params", {})), tuple(d.get("claims", ())), tuple(d.get("refutes", ())))


class Generated(NamedTuple):
    complex: Complex
    provenance: Provenance


_HEX_DIRS = ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))


def _hex_rings(R: int):
    yield (0, 0)
    for r in range(1, R + 1):
        q, s = _HEX_DIRS[4][0] * r, _HEX_DIRS[4][1] * r
        for i in range(6):
            for _ in range(r):
                yield (q, s)
                q, s = q + _HEX_DIRS[i][0], s + _HEX_DIRS[i][1]


def euclid_patch(R: int) -> Generated:
    """Radius-``R`` hexagonal ball of the equilateral triangular lattice.

    Vertex 0 is the centre; rings follow in order, each walked around the
    hexagon.  Has ``1 + 3R(R+1)`` vertices and ``6R^2`` triangles.
    """
    if R < 1:
        raise ValueError("R must be >= 1")
    coords = list(_hex_rings(R))
    index = {c: i for i, c in enumerate(coords)}
    edges = []
    for (q, s), i in index.items():
        for dq, ds in _HEX_DIRS[:3]:
            j = index.get((q + dq, s + ds))
            if j is not None:
                edges.append((i, j))
    X = flag_complex_of_graph(len(coords), edges)
    prov = Provenance(
        "euclid_patch",
        {"R": R, "center": 0},
        ("flag", "locally_k_large(6)", "simply_connected", "systolic(6)"),
    )
    return Generated(X, prov)


def _layered_patch(k: int, R: int) -> Complex:
    # Ring-by-ring disc in which every completed vertex lies in exactly k triangles.
    triangles = [(0, i, i % k + 1) for i in range(1, k + 1)]
    angle = {0: k}
    angle.update({i: 2 for i in range(1, k + 1)})
    ring = list(range(1, k + 1))
    nxt = k + 1
    for _ in range(R - 1):
        L = len(ring)
        extra = [k - angle[v] - 2 for v in ring]  # fan triangles beyond the two edge triangles
        if min(extra) < 1:
            raise ValueError(f"layered construction needs k >= 6, got k={k}")
        # new ring: interior fan vertices of v_i, then the apex over edge (v_i, v_{i+1})
        labels: list[list[int]] = []
        apex: list[int] = []
        for i in range(L):
            fan = list(range(nxt, nxt + extra[i] - 1))
            nxt += extra[i] - 1
            labels.append(fan)
            apex.append(nxt)
            nxt += 1
        new_ring = []
        for i in range(L):
            new_ring.extend(labels[i])
            new_ring.append(apex[i])
        for i, v in enumerate(ring):
            path = [apex[i - 1], *labels[i], apex[i]]
            for a, b in zip(path, path[1:]):
                triangles.append((v, a, b))
            triangles.append((v, ring[(i + 1) % L], apex[i]))
            angle[v] = k
        for i in range(L):
            for w in labels[i]:
                angle[w] = 2
            angle[apex[i]] = 3
        ring = new_ring
    return build_complex(triangles)


def hyperbolic_patch(k: int, R: int) -> Generated:
    """Radius-``R`` ball of the triangulation with ``k`` triangles at every vertex.

    Built ring by ring around vertex 0, so ring ``n`` is the sphere of radius
    ``n``.  Every vertex of radius < R lies in exactly ``k`` triangles.
    """
    if k < 7:
        raise ValueError("hyperbolic_patch needs k >= 7")
    if R < 1:
        raise ValueError("R must be >= 1")
    X = _layered_patch(k, R)
    prov = Provenance(
        "hyperbolic_patch",
        {"k": k, "R": R, "center": 0},
        ("flag", f"locally_k_large({k})", "simply_connected", f"systolic({k})"),
    )
    return Generated(X, prov)


def torus(n: int, m: int) -> Generated:
    """The ``n x m`` flat torus: square grid with one diagonal per square.

    Vertex ``(i, j)`` has label ``i * m + j``.
    """
    if n < 4 or m < 4:
        raise TooSmall(f"torus({n}, {m}) is not flag; both sides must be >= 4")

    def vid(i, j):
        return (i % n) * m + (j % m)

    triangles = []
    for i in range(n):
        for j in range(m):
            triangles.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            triangles.append((vid(i, j), vid(i, j + 1), vid(i + 1, j + 1)))
    X = build_complex(triangles)
    # the straight wrap-around loops have lengths n and m and no diagonal
    refutes = ("simply_connected", "k_large(6)") if min(n, m) < 6 else ("simply_connected",)
    prov = Provenance("torus", {"n": n, "m": m}, ("flag", "locally_k_large(6)"), refutes)
    return Generated(X, prov)


def octahedron() -> Generated:
    """Octahedron with antipodal pairs (0,5), (1,3), (2,4)."""
    parts = ((0, 5), (1, 3), (2, 4))
    X = build_complex([(a, b, c) for a in parts[0] for b in parts[1] for c in parts[2]])
    return Generated(X, Provenance("octahedron", {}, ("flag",), ("locally_k_large(6)",)))


def icosahedron() -> Generated:
    """Icosahedron: pole 0, upper ring 1-5, lower ring 6-10, pole 11."""
    up = [1 + i for i in range(5)]
    lo = [6 + i for i in range(5)]
    tris = []
    for i in range(5):
        j = (i + 1) % 5
        tris += [(0, up[i], up[j]), (up[i], up[j], lo[i]), (lo[i], lo[j], up[j]), (11, lo[i], lo[j])]
    X = build_complex(tris)
    return Generated(X, Provenance("icosahedron", {}, ("flag",), ("locally_k_large(6)",)))


GENERATORS = {
    "euclid": (euclid_patch, ("R",)),
    "hyperbolic": (hyperbolic_patch, ("k", "R")),
    "torus": (torus, ("n", "m")),
    "octahedron": (octahedron, ()),
    "icosahedron": (icosahedron, ()),
}


def verify_provenance(X: Complex, prov: Provenance) -> dict[str, bool | None]:
    """Re-check every claim and refutation; ``None`` marks undecidable ones."""
    from .largeness import is_k_large, is_locally_k_large
    from .complex import is_flag

    def check(claim: str) -> bool | None:
        if claim == "flag":
            return is_flag(X).is_flag
        if claim == "simply_connected":
            return None
        m = re.fullmatch(r"(k_large|locally_k_large|systolic)\((\d+)\)", claim)
        if not m:
            raise ValueError(f"unknown claim {claim!r}")
        kind, k = m.group(1), int(m.group(2))
        if kind == "k_large":
            return is_k_large(X, k).verdict
        local = is_locally_k_large(X, k).verdict
        if kind == "locally_k_large":
            return local
        connected = X.vertex_count == 0 or bool((X.distances[X.vertices[0], list(X.vertices)] >= 0).all())
        return local and connected

    out: dict[str, bool | None] = {}
    for c in prov.claims:
        out[c] = check(c)
    for c in prov.refutes:
        r = check(c)
        out["not " + c] = None if r is None else not r
    return out
