"""Pure Python / numpy implementations of the hot kernels.

Every function here has a twin in ``_ckernels.pyx`` with identical inputs,
outputs and tie-breaking, so the backend choice never changes a result.

Bit layout: bit ``j`` of a packed row lives in word ``j // 64`` at position
``j % 64``.  Matrices over F2 used by the group kernels are stored as one
``uint64`` per row (dimension <= 64) and act on row vectors from the right.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"

_U64 = np.uint64


def _to_int(words: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(words, dtype="<u8").tobytes(), "little")


def _from_int(value: int, nwords: int) -> np.ndarray:
    return np.frombuffer(value.to_bytes(8 * nwords, "little"), dtype="<u8").astype(_U64)


def rref(words: np.ndarray, ncols: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form over F2.

    Pivots are taken leftmost column first, and within a column the lowest
    remaining row index wins.  Returns the reduced rows (same shape as the
    input, zero rows last) and the pivot columns.
    """
    nrows, nwords = words.shape
    rows = [_to_int(words[i]) for i in range(nrows)]
    pivots = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        bit = 1 << col
        for i in range(r, nrows):
            if rows[i] & bit:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        prow = rows[r]
        for j in range(nrows):
            if j != r and rows[j] & bit:
                rows[j] ^= prow
        pivots.append(col)
        r += 1
    out = np.zeros((nrows, nwords), dtype=_U64)
    for i, value in enumerate(rows):
        if value:
            out[i] = _from_int(value, nwords)
    return out, np.array(pivots, dtype=np.int64)


def min_weight(syn: np.ndarray, log: np.ndarray, wmax: int):
    """Smallest set of columns whose syndromes cancel but logicals do not.

    ``syn`` and ``log`` are ``(n, W)`` packed column arrays.  Combinations
    are visited by increasing size, lexicographically within a size.
    Returns ``(weight, support)`` or ``None`` if nothing up to ``wmax``.
    """
    n = syn.shape[0]
    scol = [_to_int(syn[i]) for i in range(n)]
    lcol = [_to_int(log[i]) for i in range(n)]
    for w in range(1, min(wmax, n) + 1):
        found = _search(scol, lcol, n, w)
        if found is not None:
            return w, found
    return None


def _search(scol, lcol, n, w):
    chosen = [0] * w

    def rec(depth, start, s, l):
        if depth == w:
            return s == 0 and l != 0
        for i in range(start, n - (w - depth) + 1):
            chosen[depth] = i
            if rec(depth + 1, i + 1, s ^ scol[i], l ^ lcol[i]):
                return True
        return False

    if rec(0, 0, 0, 0):
        return tuple(chosen)
    return None


def vec_images(points: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """Images ``p . M`` of many row vectors under one matrix."""
    out = np.zeros(points.shape[0], dtype=_U64)
    for j in range(mat.shape[0]):
        sel = ((points >> _U64(j)) & _U64(1)).astype(bool)
        out[sel] ^= mat[j]
    return out


def mat_mul(a: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Batched product ``a[b] . c[b]``; ``c`` may be a single matrix."""
    m = a.shape[1]
    out = np.zeros_like(a)
    if c.ndim == 1:
        for j in range(m):
            sel = ((a >> _U64(j)) & _U64(1)).astype(bool)
            out[sel] ^= c[j]
        return out
    for j in range(m):
        sel = ((a >> _U64(j)) & _U64(1)).astype(bool)
        out ^= np.where(sel, c[:, j][:, None], _U64(0))
    return out


def sift(batch: np.ndarray, levels: list) -> tuple[np.ndarray, np.ndarray]:
    """Sift a batch of matrices through stabilizer-chain levels.

    ``levels`` holds ``(base_point, lookup, tinv)`` triples: ``lookup`` maps a
    vector to its orbit index (or -1) and ``tinv[i]`` is the inverse coset
    representative of orbit point ``i``.  Returns the residues and, per
    element, the number of levels passed.
    """
    g = np.array(batch, dtype=_U64, copy=True)
    depth = np.zeros(g.shape[0], dtype=np.int64)
    active = np.arange(g.shape[0])
    for base, lookup, tinv in levels:
        if active.size == 0:
            break
        sub = g[active]
        pts = _point_images(sub, base)
        idx = lookup[pts.astype(np.int64)]
        ok = idx >= 0
        active = active[ok]
        if active.size == 0:
            break
        g[active] = mat_mul(sub[ok], tinv[idx[ok]])
        depth[active] += 1
    return g, depth


def _point_images(mats: np.ndarray, point: int) -> np.ndarray:
    out = np.zeros(mats.shape[0], dtype=_U64)
    j = 0
    p = int(point)
    while p:
        if p & 1:
            out ^= mats[:, j]
        p >>= 1
        j += 1
    return out


def point_images(mats: np.ndarray, point: int) -> np.ndarray:
    """Image of one vector under each matrix of a batch."""
    return _point_images(mats, point)
