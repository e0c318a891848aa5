"""Pure-Python implementations of the hot graph kernels.

Used when the compiled ``_kernels`` extension is unavailable or when
``SYSTOLIC_PURE_PYTHON`` is set.  Signatures and results match the compiled
module exactly; ``tests/test_kernels.py`` runs both against each other.

All kernels take the 1-skeleton in CSR form (``indptr``, ``indices``, int32)
and, where needed, the all-pairs distance matrix ``D`` (int32, -1 for
unreachable).
"""

from __future__ import annotations

from collections import deque
from itertools import combinations

import numpy as np


def bfs(indptr, indices, source):
    n = len(indptr) - 1
    dist = [-1] * n
    dist[source] = 0
    queue = deque([source])
    ip = indptr.tolist()
    ix = indices.tolist()
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for k in range(ip[u], ip[u + 1]):
            w = ix[k]
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return np.array(dist, dtype=np.int32)


def all_pairs_distances(indptr, indices):
    n = len(indptr) - 1
    D = np.empty((n, n), dtype=np.int32)
    for s in range(n):
        D[s] = bfs(indptr, indices, s)
    return D


def geodesic_interval(indptr, indices, D, a, b):
    """Vertices on some geodesic a -> b, listed layer by layer from ``a``."""
    d = int(D[a, b])
    if d < 0:
        return []
    out = [a]
    layer = [a]
    for t in range(d):
        nxt = []
        seen = set()
        for u in layer:
            for k in range(indptr[u], indptr[u + 1]):
                w = int(indices[k])
                if w not in seen and D[a, w] == t + 1 and D[w, b] == d - t - 1:
                    seen.add(w)
                    nxt.append(w)
        nxt.sort()
        out.extend(nxt)
        layer = nxt
    return out


def far_distances(indptr, indices, D, a, b, queries):
    """For each query x: the largest distance from x to a geodesic a -> b.

    Distance from x to a path is the minimum over its vertices; the maximum
    is taken over all geodesics, computed as a bottleneck DP on the interval.
    """
    queries = np.asarray(queries, dtype=np.int64)
    interval = geodesic_interval(indptr, indices, D, a, b)
    if not interval:
        return np.full(len(queries), -1, dtype=np.int32)
    best = {a: D[queries, a].astype(np.int32)}
    da = D[a]
    for w in interval[1:]:
        acc = None
        for k in range(indptr[w], indptr[w + 1]):
            p = int(indices[k])
            if da[p] == da[w] - 1 and p in best:
                acc = best[p] if acc is None else np.maximum(acc, best[p])
        best[w] = np.minimum(D[queries, w], acc)
    return best[b].astype(np.int32)


def bigon_thinness(indptr, indices, D, a, b):
    """Return ``(thinness, witness)`` for all geodesic bigons between a and b."""
    interval = geodesic_interval(indptr, indices, D, a, b)
    if not interval:
        return -1, -1
    far = far_distances(indptr, indices, D, a, b, interval)
    i = int(np.argmax(far))
    return int(far[i]), int(interval[i])


def triangle_thinness(indptr, indices, D, a, b, c):
    """Return ``(thinness, side, witness)`` over all geodesic triangles abc.

    ``side`` is 0 for a-b, 1 for b-c, 2 for c-a.
    """
    sides = ((a, b), (b, c), (c, a))
    intervals = [geodesic_interval(indptr, indices, D, u, v) for u, v in sides]
    if not all(intervals):
        return -1, -1, -1
    best, best_side, best_x = -1, -1, -1
    for i in range(3):
        q = intervals[i]
        j, k = (i + 1) % 3, (i + 2) % 3
        fj = far_distances(indptr, indices, D, *sides[j], q)
        fk = far_distances(indptr, indices, D, *sides[k], q)
        vals = np.minimum(fj, fk)
        m = int(np.argmax(vals))
        if vals[m] > best:
            best, best_side, best_x = int(vals[m]), i, int(q[m])
    return best, best_side, best_x


def scan_bigons(indptr, indices, D, verts):
    """Maximum bigon thinness over unordered pairs of ``verts``: ``(value, a, b)``."""
    best = (-1, -1, -1)
    for a, b in combinations(sorted(int(v) for v in verts), 2):
        t, _ = bigon_thinness(indptr, indices, D, a, b)
        if t > best[0]:
            best = (t, a, b)
    return best


def scan_triangles(indptr, indices, D, verts):
    """Maximum triangle thinness over unordered triples: ``(value, a, b, c)``."""
    best = (-1, -1, -1, -1)
    for a, b, c in combinations(sorted(int(v) for v in verts), 3):
        t, _, _ = triangle_thinness(indptr, indices, D, a, b, c)
        if t > best[0]:
            best = (t, a, b, c)
    return best
