# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the graph kernels in ``_pykernels``.

Same signatures, same results (including tie-breaking of witnesses).
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int32_t i32


cdef void _bfs(const i32[:] indptr, const i32[:] indices, int source, i32[:] dist, i32[:] queue) noexcept nogil:
    cdef int n = indptr.shape[0] - 1
    cdef int head = 0, tail = 0, u, w, k
    for k in range(n):
        dist[k] = -1
    dist[source] = 0
    queue[tail] = source
    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue[tail] = w
                tail += 1


def bfs(indptr, indices, int source):
    cdef int n = len(indptr) - 1
    dist = np.empty(n, dtype=np.int32)
    queue = np.empty(max(n, 1), dtype=np.int32)
    _bfs(indptr, indices, source, dist, queue)
    return dist


def all_pairs_distances(indptr, indices):
    cdef int n = len(indptr) - 1
    cdef int s
    D = np.empty((n, n), dtype=np.int32)
    cdef i32[:, :] Dv = D
    queue = np.empty(max(n, 1), dtype=np.int32)
    cdef i32[:] qv = queue
    cdef const i32[:] ip = indptr
    cdef const i32[:] ix = indices
    with nogil:
        for s in range(n):
            _bfs(ip, ix, s, Dv[s], qv)
    return D


cdef int _interval(const i32[:] indptr, const i32[:] indices, const i32[:, :] D,
                   int a, int b, i32* out, i32* mark, int stamp) noexcept nogil:
    # fills out[0:count] layer by layer from a, each layer ascending; mark[w] = stamp for members
    cdef int d = D[a, b]
    cdef int count, start, end, t, i, k, u, w, j, tmp
    if d < 0:
        return 0
    out[0] = a
    mark[a] = stamp
    count = 1
    start = 0
    end = 1
    for t in range(d):
        for i in range(start, end):
            u = out[i]
            for k in range(indptr[u], indptr[u + 1]):
                w = indices[k]
                if mark[w] != stamp and D[a, w] == t + 1 and D[w, b] == d - t - 1:
                    mark[w] = stamp
                    out[count] = w
                    count += 1
        # insertion sort of the new layer
        for i in range(end + 1, count):
            tmp = out[i]
            j = i - 1
            while j >= end and out[j] > tmp:
                out[j + 1] = out[j]
                j -= 1
            out[j + 1] = tmp
        start = end
        end = count
    return count


cdef int _far(const i32[:] indptr, const i32[:] indices, const i32[:, :] D,
              const i32* interval, int count, const i32* mark, int stamp,
              int x, i32* best) noexcept nogil:
    # best is indexed by vertex; only interval members are touched
    cdef int a = interval[0]
    cdef int i, k, w, p, acc, dw
    best[a] = D[x, a]
    for i in range(1, count):
        w = interval[i]
        acc = -1
        for k in range(indptr[w], indptr[w + 1]):
            p = indices[k]
            if mark[p] == stamp and D[a, p] == D[a, w] - 1:
                if best[p] > acc:
                    acc = best[p]
        dw = D[x, w]
        best[w] = dw if dw < acc else acc
    return best[interval[count - 1]]


cdef class _Work:
    cdef i32[:] iv0, iv1, iv2, mark0, mark1, mark2, best
    cdef int stamp

    def __init__(self, int n):
        n = max(n, 1)
        self.iv0 = np.empty(n, dtype=np.int32)
        self.iv1 = np.empty(n, dtype=np.int32)
        self.iv2 = np.empty(n, dtype=np.int32)
        self.mark0 = np.zeros(n, dtype=np.int32)
        self.mark1 = np.zeros(n, dtype=np.int32)
        self.mark2 = np.zeros(n, dtype=np.int32)
        self.best = np.empty(n, dtype=np.int32)
        self.stamp = 0


def geodesic_interval(indptr, indices, D, int a, int b):
    cdef int n = len(indptr) - 1
    cdef _Work w = _Work(n)
    cdef int c = _interval(indptr, indices, D, a, b, &w.iv0[0], &w.mark0[0], 1)
    return [int(w.iv0[i]) for i in range(c)]


def far_distances(indptr, indices, D, int a, int b, queries):
    cdef int n = len(indptr) - 1
    cdef _Work w = _Work(n)
    cdef int c = _interval(indptr, indices, D, a, b, &w.iv0[0], &w.mark0[0], 1)
    q = np.asarray(queries, dtype=np.int64)
    out = np.full(len(q), -1, dtype=np.int32)
    if c == 0:
        return out
    cdef int i
    for i in range(len(q)):
        out[i] = _far(indptr, indices, D, &w.iv0[0], c, &w.mark0[0], 1, <int>q[i], &w.best[0])
    return out


cdef int _bigon(const i32[:] indptr, const i32[:] indices, const i32[:, :] D,
                int a, int b, _Work w, int* witness) noexcept:
    cdef int c, i, x, v, best = -1
    w.stamp += 1
    c = _interval(indptr, indices, D, a, b, &w.iv0[0], &w.mark0[0], w.stamp)
    witness[0] = -1
    if c == 0:
        return -1
    for i in range(c):
        x = w.iv0[i]
        v = _far(indptr, indices, D, &w.iv0[0], c, &w.mark0[0], w.stamp, x, &w.best[0])
        if v > best:
            best = v
            witness[0] = x
    return best


cdef int _triangle(const i32[:] indptr, const i32[:] indices, const i32[:, :] D,
                   int a, int b, int c, _Work w, int* side, int* witness) noexcept:
    cdef int ends[3][2]
    cdef int counts[3]
    cdef int s, i, x, fj, fk, v, j, k, best = -1
    cdef i32* ivs[3]
    cdef i32* marks[3]
    ends[0][0] = a; ends[0][1] = b
    ends[1][0] = b; ends[1][1] = c
    ends[2][0] = c; ends[2][1] = a
    w.stamp += 1
    ivs[0] = &w.iv0[0]; ivs[1] = &w.iv1[0]; ivs[2] = &w.iv2[0]
    marks[0] = &w.mark0[0]; marks[1] = &w.mark1[0]; marks[2] = &w.mark2[0]
    side[0] = -1
    witness[0] = -1
    for s in range(3):
        counts[s] = _interval(indptr, indices, D, ends[s][0], ends[s][1], ivs[s], marks[s], w.stamp)
        if counts[s] == 0:
            return -1
    for s in range(3):
        j = (s + 1) % 3
        k = (s + 2) % 3
        for i in range(counts[s]):
            x = ivs[s][i]
            fj = _far(indptr, indices, D, ivs[j], counts[j], marks[j], w.stamp, x, &w.best[0])
            if fj <= best:
                continue
            fk = _far(indptr, indices, D, ivs[k], counts[k], marks[k], w.stamp, x, &w.best[0])
            v = fj if fj < fk else fk
            if v > best:
                best = v
                side[0] = s
                witness[0] = x
    return best


def bigon_thinness(indptr, indices, D, int a, int b):
    cdef _Work w = _Work(len(indptr) - 1)
    cdef int witness
    cdef int t = _bigon(indptr, indices, D, a, b, w, &witness)
    return t, witness


def triangle_thinness(indptr, indices, D, int a, int b, int c):
    cdef _Work w = _Work(len(indptr) - 1)
    cdef int side, witness
    cdef int t = _triangle(indptr, indices, D, a, b, c, w, &side, &witness)
    return t, side, witness


def scan_bigons(indptr, indices, D, verts):
    vs = np.array(sorted(int(v) for v in verts), dtype=np.int32)
    cdef const i32[:] ip = indptr
    cdef const i32[:] ix = indices
    cdef const i32[:, :] Dv = D
    cdef i32[:] V = vs
    cdef int m = vs.shape[0]
    cdef _Work w = _Work(len(indptr) - 1)
    cdef int i, j, t, witness
    cdef int best = -1, ba = -1, bb = -1
    for i in range(m):
        for j in range(i + 1, m):
            t = _bigon(ip, ix, Dv, V[i], V[j], w, &witness)
            if t > best:
                best = t
                ba = V[i]
                bb = V[j]
    return best, ba, bb


def scan_triangles(indptr, indices, D, verts):
    vs = np.array(sorted(int(v) for v in verts), dtype=np.int32)
    cdef const i32[:] ip = indptr
    cdef const i32[:] ix = indices
    cdef const i32[:, :] Dv = D
    cdef i32[:] V = vs
    cdef int m = vs.shape[0]
    cdef _Work w = _Work(len(indptr) - 1)
    cdef int i, j, l, t, side, witness
    cdef int best = -1, ba = -1, bb = -1, bc = -1
    for i in range(m):
        for j in range(i + 1, m):
            for l in range(j + 1, m):
                t = _triangle(ip, ix, Dv, V[i], V[j], V[l], w, &side, &witness)
                if t > best:
                    best = t
                    ba = V[i]
                    bb = V[j]
                    bc = V[l]
    return best, ba, bb, bc
