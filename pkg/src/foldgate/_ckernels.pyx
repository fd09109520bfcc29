# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``.

Same signatures, same tie-breaking; see that module for the contracts.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t, int32_t

cnp.import_array()

BACKEND = "cython"


def rref(words, Py_ssize_t ncols):
    cdef cnp.ndarray[uint64_t, ndim=2] a = np.array(words, dtype=np.uint64, copy=True, order="C")
    cdef Py_ssize_t nrows = a.shape[0], nwords = a.shape[1]
    cdef Py_ssize_t r = 0, col, i, j, w, word
    cdef uint64_t bit, tmp
    pivots = []
    for col in range(ncols):
        if r == nrows:
            break
        word = col >> 6
        bit = (<uint64_t>1) << (col & 63)
        i = r
        while i < nrows and not (a[i, word] & bit):
            i += 1
        if i == nrows:
            continue
        if i != r:
            for w in range(nwords):
                tmp = a[r, w]
                a[r, w] = a[i, w]
                a[i, w] = tmp
        for j in range(nrows):
            if j != r and (a[j, word] & bit):
                for w in range(word, nwords):
                    a[j, w] ^= a[r, w]
        pivots.append(col)
        r += 1
    return a, np.array(pivots, dtype=np.int64)


def min_weight(syn, log, int wmax):
    cdef const uint64_t[:, :] s = np.ascontiguousarray(syn, dtype=np.uint64)
    cdef const uint64_t[:, :] l = np.ascontiguousarray(log, dtype=np.uint64)
    cdef Py_ssize_t n = s.shape[0], ws = s.shape[1], wl = l.shape[1]
    cdef int w
    if wmax > n:
        wmax = n
    for w in range(1, wmax + 1):
        found = _search(s, l, n, ws, wl, w)
        if found is not None:
            return w, found
    return None


cdef object _search(const uint64_t[:, :] s, const uint64_t[:, :] l, Py_ssize_t n,
                    Py_ssize_t ws, Py_ssize_t wl, int w):
    # prefix xors per depth; depth d holds the xor of the first d choices
    cdef uint64_t[:, :] ps = np.zeros((w + 1, max(ws, 1)), dtype=np.uint64)
    cdef uint64_t[:, :] pl = np.zeros((w + 1, max(wl, 1)), dtype=np.uint64)
    cdef int64_t[:] idx = np.zeros(w, dtype=np.int64)
    cdef int d = 0
    cdef Py_ssize_t k, i
    cdef bint good
    idx[0] = 0
    while d >= 0:
        i = idx[d]
        if i > n - (w - d):
            d -= 1
            if d >= 0:
                idx[d] += 1
            continue
        for k in range(ws):
            ps[d + 1, k] = ps[d, k] ^ s[i, k]
        for k in range(wl):
            pl[d + 1, k] = pl[d, k] ^ l[i, k]
        if d + 1 == w:
            good = True
            for k in range(ws):
                if ps[w, k]:
                    good = False
                    break
            if good:
                good = False
                for k in range(wl):
                    if pl[w, k]:
                        good = True
                        break
            if good:
                return tuple(int(idx[k]) for k in range(w))
            idx[d] += 1
        else:
            d += 1
            idx[d] = i + 1
    return None


cdef inline uint64_t _apply(uint64_t p, const uint64_t[:] mat, Py_ssize_t m) nogil:
    cdef uint64_t out = 0
    cdef Py_ssize_t j = 0
    while p:
        if p & 1:
            out ^= mat[j]
        p >>= 1
        j += 1
    return out


def vec_images(points, mat):
    cdef const uint64_t[:] pts = np.ascontiguousarray(points, dtype=np.uint64)
    cdef const uint64_t[:] mm = np.ascontiguousarray(mat, dtype=np.uint64)
    cdef Py_ssize_t n = pts.shape[0], i, m = mm.shape[0]
    out = np.empty(n, dtype=np.uint64)
    cdef uint64_t[:] o = out
    with nogil:
        for i in range(n):
            o[i] = _apply(pts[i], mm, m)
    return out


def mat_mul(a, c):
    cdef const uint64_t[:, :] aa = np.ascontiguousarray(a, dtype=np.uint64)
    cdef Py_ssize_t b = aa.shape[0], m = aa.shape[1], i, j
    out = np.empty((b, m), dtype=np.uint64)
    cdef uint64_t[:, :] o = out
    cdef const uint64_t[:] single
    cdef const uint64_t[:, :] cc
    if np.ndim(c) == 1:
        single = np.ascontiguousarray(c, dtype=np.uint64)
        with nogil:
            for i in range(b):
                for j in range(m):
                    o[i, j] = _apply(aa[i, j], single, m)
    else:
        cc = np.ascontiguousarray(c, dtype=np.uint64)
        with nogil:
            for i in range(b):
                for j in range(m):
                    o[i, j] = _apply(aa[i, j], cc[i], m)
    return out


def point_images(mats, point):
    cdef const uint64_t[:, :] g = np.ascontiguousarray(mats, dtype=np.uint64)
    cdef Py_ssize_t b = g.shape[0], m = g.shape[1], i
    cdef uint64_t p = point
    out = np.empty(b, dtype=np.uint64)
    cdef uint64_t[:] o = out
    with nogil:
        for i in range(b):
            o[i] = _apply(p, g[i], m)
    return out


def sift(batch, levels):
    cdef cnp.ndarray[uint64_t, ndim=2] g = np.array(batch, dtype=np.uint64, copy=True, order="C")
    cdef Py_ssize_t b = g.shape[0], m = g.shape[1], i, j, k
    depth_arr = np.zeros(b, dtype=np.int64)
    cdef int64_t[:] depth = depth_arr
    cdef uint64_t[:, :] gv = g
    cdef const int32_t[:] lookup
    cdef const uint64_t[:, :] tinv
    cdef uint64_t base, p
    cdef int32_t idx
    cdef Py_ssize_t level = 0
    cdef uint64_t row[64]
    for entry in levels:
        base = entry[0]
        lookup = entry[1]
        tinv = entry[2]
        with nogil:
            for i in range(b):
                if depth[i] != level:
                    continue
                p = _apply(base, gv[i], m)
                idx = lookup[p]
                if idx < 0:
                    continue
                for j in range(m):
                    row[j] = _apply(gv[i, j], tinv[idx], m)
                for j in range(m):
                    gv[i, j] = row[j]
                depth[i] += 1
        level += 1
    return g, depth_arr
