# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of ``_kernels_py``. Same signatures, same output order.

Tables arrive as C-contiguous ``int32`` arrays, masks as ``uint64`` arrays.
Mask-based kernels require at most 64 points; the selector falls back to the
reference code otherwise.
"""

import numpy as np

ctypedef unsigned long long u64


def subword_leq(str u, str v, above=None):
    cdef Py_ssize_t i = 0, j, n = len(u), m = len(v)
    cdef Py_UCS4 c
    if n == 0:
        return True
    if above is None:
        for j in range(m):
            c = v[j]
            if c == u[i]:
                i += 1
                if i == n:
                    return True
        return False
    for j in range(m):
        if v[j] in above[u[i]]:
            i += 1
            if i == n:
                return True
    return False


def triangle_violation(const int[:, ::1] d, const int[:, ::1] op, const int[:, ::1] le):
    cdef Py_ssize_t n = d.shape[0], x, y, z
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if not le[d[x, y], op[d[x, z], d[z, y]]]:
                    return (x, y, z)
    return None


cdef inline bint _form_ok(int i, int v, int* f, const int[:, ::1] d,
                          const int[:, ::1] op, const int[:, ::1] le,
                          const int[::1] iv, bint strong) nogil:
    cdef int j, w
    for j in range(i):
        w = f[j]
        if not le[d[j, i], op[w, iv[v]]]:
            return False
        if not le[d[i, j], op[v, iv[w]]]:
            return False
        if strong:
            if not le[w, op[d[j, i], v]]:
                return False
            if not le[v, op[d[i, j], w]]:
                return False
    return True


def enum_forms(const int[:, ::1] d, const int[:, ::1] op, const int[:, ::1] le,
               const int[::1] iv, bint strong, long limit):
    cdef int n = d.shape[0], h = op.shape[0], i, v, k
    out = []
    if n == 0:
        return [()]
    cdef int[::1] f = np.zeros(n, dtype=np.int32)
    cdef int[::1] nxt = np.zeros(n, dtype=np.int32)
    i = 0
    nxt[0] = 0
    while i >= 0:
        v = nxt[i]
        while v < h and not _form_ok(i, v, &f[0], d, op, le, iv, strong):
            v += 1
        if v == h:
            i -= 1
            continue
        f[i] = v
        nxt[i] = v + 1
        if i == n - 1:
            out.append(tuple([f[k] for k in range(n)]))
            if len(out) > limit:
                return out
        else:
            i += 1
            nxt[i] = 0
    return out


def minimal_rows(const int[:, ::1] rows, const int[:, ::1] le):
    cdef Py_ssize_t m = rows.shape[0], n = rows.shape[1], i, j, x
    cdef bint minimal, below, same
    keep = []
    for i in range(m):
        minimal = True
        for j in range(m):
            if j == i:
                continue
            below = True
            same = True
            for x in range(n):
                if rows[j, x] != rows[i, x]:
                    same = False
                if not le[rows[j, x], rows[i, x]]:
                    below = False
                    break
            if below and not same:
                minimal = False
                break
        if minimal:
            keep.append(i)
    return keep


def enum_maps(const int[:, ::1] s, const int[:, ::1] t, const int[:, ::1] le,
              const int[::1] fixed, long limit):
    cdef int n = s.shape[0], m = t.shape[0], i, v, j, hi, k
    cdef bint good
    out = []
    if n == 0:
        return [()]
    cdef int[::1] f = np.zeros(n, dtype=np.int32)
    cdef int[::1] nxt = np.zeros(n, dtype=np.int32)
    i = 0
    nxt[0] = fixed[0] if fixed[0] >= 0 else 0
    while i >= 0:
        v = nxt[i]
        hi = fixed[i] + 1 if fixed[i] >= 0 else m
        while v < hi:
            good = True
            for j in range(i):
                if not le[t[f[j], v], s[j, i]] or not le[t[v, f[j]], s[i, j]]:
                    good = False
                    break
            if good:
                break
            v += 1
        if v >= hi:
            i -= 1
            continue
        f[i] = v
        nxt[i] = v + 1
        if i == n - 1:
            out.append(tuple([f[k] for k in range(n)]))
            if len(out) > limit:
                return out
        else:
            i += 1
            nxt[i] = fixed[i] if fixed[i] >= 0 else 0
    return out


def helly2_violation(const u64[::1] masks, int n, anchors=None):
    cdef Py_ssize_t m = masks.shape[0], b, c, k
    cdef int t
    cdef u64 full = (<u64>1 << n) - 1 if n < 64 else <u64>0xFFFFFFFFFFFFFFFF
    cdef u64 mb, mc, acc, bit
    pts = list(range(n)) if anchors is None else list(anchors)
    for b in range(m):
        mb = masks[b]
        for t in pts:
            bit = <u64>1 << t
            if mb & bit:
                continue
            acc = full
            for c in range(m):
                mc = masks[c]
                if (mc & bit) and (mc & mb):
                    acc &= mc
            if not (acc & mb):
                return (b, t)
    return None


def commuting_check(const int[:, ::1] maps):
    cdef Py_ssize_t m = maps.shape[0], n = maps.shape[1], i, j, x
    cdef long count = 0
    cdef bint comm
    cdef u64[::1] fix = np.zeros(m, dtype=np.uint64)
    for i in range(m):
        for x in range(n):
            if maps[i, x] == x:
                fix[i] |= <u64>1 << x
    bad = []
    for i in range(m):
        for j in range(i + 1, m):
            comm = True
            for x in range(n):
                if maps[i, maps[j, x]] != maps[j, maps[i, x]]:
                    comm = False
                    break
            if comm:
                count += 1
                if not (fix[i] & fix[j]):
                    bad.append((i, j))
    return count, bad


def enum_holes(const u64[:, ::1] balls, int n):
    cdef int k = balls.shape[0], h = balls.shape[1], i, r, t
    cdef u64 full = (<u64>1 << n) - 1 if n < 64 else <u64>0xFFFFFFFFFFFFFFFF
    out = []
    if k == 0:
        return [()]
    cdef int[::1] vec = np.zeros(k, dtype=np.int32)
    cdef u64[::1] acc = np.zeros(k + 1, dtype=np.uint64)
    acc[0] = full
    i = 0
    vec[0] = -1
    while i >= 0:
        r = vec[i] + 1
        if r == h:
            i -= 1
            continue
        vec[i] = r
        acc[i + 1] = acc[i] & balls[i, r]
        if i == k - 1:
            if acc[k] == 0:
                out.append(tuple([vec[t] for t in range(k)]))
        else:
            i += 1
            vec[i] = -1
    return out


def preserves_holes(const int[:, ::1] holes, const int[::1] fmap,
                    const int[:, ::1] meet, const u64[:, ::1] balls, int one, int n):
    cdef Py_ssize_t nh = holes.shape[0], k = holes.shape[1], idx, y
    cdef int e = balls.shape[0], x, r
    cdef u64 full = (<u64>1 << n) - 1 if n < 64 else <u64>0xFFFFFFFFFFFFFFFF
    cdef u64 acc
    cdef int[::1] img = np.zeros(max(e, 1), dtype=np.int32)
    for idx in range(nh):
        for x in range(e):
            img[x] = one
        for y in range(k):
            x = fmap[y]
            img[x] = meet[img[x], holes[idx, y]]
        acc = full
        for x in range(e):
            if img[x] != one:
                acc &= balls[x, img[x]]
        if acc:
            return idx
    return -1
