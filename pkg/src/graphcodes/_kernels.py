"""Bit-packed F2 column kernels.

Columns are rows of a ``uint64`` array; bit ``r`` of a column lives in word
``r >> 6`` at position ``r & 63``.  Every kernel has a numba-compiled version
and a plain numpy/Python version with identical semantics.  The active
implementation is chosen once at import time: set ``GRAPHCODES_NUMBA=0`` to
force the fallback (it is also used when numba cannot be imported).
"""
import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def _flag_enabled():
    value = os.environ.get("GRAPHCODES_NUMBA", "1").strip().lower()
    return value not in ("0", "false", "no", "off")


USE_NUMBA = HAVE_NUMBA and _flag_enabled()


# --------------------------------------------------------------------------
# pure numpy / python versions

def _highest_bit(word):
    return int(word).bit_length() - 1


def pivot_py(col):
    nz = np.flatnonzero(col)
    if nz.size == 0:
        return -1
    w = int(nz[-1])
    return (w << 6) + _highest_bit(col[w])


def reduce_one_py(cols, j, owner, added):
    n = 0
    while True:
        p = pivot_py(cols[j])
        if p < 0:
            return n, -1, -1
        o = owner[p]
        if o == -1:
            owner[p] = j
            return n, p, -1
        if o < j:
            cols[j] ^= cols[o]
            added[n] = o
            n += 1
            continue
        owner[p] = j
        return n, p, o


def reduce_remainder_py(vec, cols, owner, n_cols, targets):
    n = 0
    one = np.uint64(1)
    while True:
        p = pivot_py(vec)
        if p < 0:
            return n
        o = owner[p]
        if o == -1:
            vec[p >> 6] ^= one << np.uint64(p & 63)
            targets[n] = n_cols + p
        else:
            vec ^= cols[o]
            targets[n] = o
        n += 1


def reduce_matrix_py(cols):
    n_cols = cols.shape[0]
    pivots = np.full(n_cols, -1, dtype=np.int64)
    lookup = {}
    adds = 0
    for j in range(n_cols):
        p = pivot_py(cols[j])
        while p >= 0 and p in lookup:
            cols[j] ^= cols[lookup[p]]
            adds += 1
            p = pivot_py(cols[j])
        if p >= 0:
            lookup[p] = j
        pivots[j] = p
    return pivots, adds


# --------------------------------------------------------------------------
# numba versions

if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _pivot_nb(col):
        for w in range(col.shape[0] - 1, -1, -1):
            x = col[w]
            if x != 0:
                b = 63
                while (x >> np.uint64(b)) & np.uint64(1) == 0:
                    b -= 1
                return w * 64 + b
        return -1

    @numba.njit(cache=True)
    def _reduce_one_nb(cols, j, owner, added):
        n = 0
        while True:
            p = _pivot_nb(cols[j])
            if p < 0:
                return n, -1, -1
            o = owner[p]
            if o == -1:
                owner[p] = j
                return n, p, -1
            if o < j:
                for w in range(cols.shape[1]):
                    cols[j, w] ^= cols[o, w]
                added[n] = o
                n += 1
                continue
            owner[p] = j
            return n, p, o

    @numba.njit(cache=True)
    def _reduce_remainder_nb(vec, cols, owner, n_cols, targets):
        n = 0
        while True:
            p = _pivot_nb(vec)
            if p < 0:
                return n
            o = owner[p]
            if o == -1:
                vec[p >> 6] ^= np.uint64(1) << np.uint64(p & 63)
                targets[n] = n_cols + p
            else:
                for w in range(vec.shape[0]):
                    vec[w] ^= cols[o, w]
                targets[n] = o
            n += 1

    @numba.njit(cache=True)
    def _reduce_matrix_nb(cols):
        n_cols = cols.shape[0]
        pivots = np.full(n_cols, -1, dtype=np.int64)
        lookup = np.full(cols.shape[1] * 64, -1, dtype=np.int64)
        adds = 0
        for j in range(n_cols):
            p = _pivot_nb(cols[j])
            while p >= 0 and lookup[p] >= 0:
                o = lookup[p]
                for w in range(cols.shape[1]):
                    cols[j, w] ^= cols[o, w]
                adds += 1
                p = _pivot_nb(cols[j])
            if p >= 0:
                lookup[p] = j
            pivots[j] = p
        return pivots, adds

    def pivot_nb(col):
        return int(_pivot_nb(col))

    def reduce_one_nb(cols, j, owner, added):
        n, p, o = _reduce_one_nb(cols, j, owner, added)
        return int(n), int(p), int(o)

    def reduce_remainder_nb(vec, cols, owner, n_cols, targets):
        return int(_reduce_remainder_nb(vec, cols, owner, n_cols, targets))

    def reduce_matrix_nb(cols):
        pivots, adds = _reduce_matrix_nb(cols)
        return pivots, int(adds)


if USE_NUMBA:
    pivot = pivot_nb
    reduce_one = reduce_one_nb
    reduce_remainder = reduce_remainder_nb
    reduce_matrix = reduce_matrix_nb
else:
    pivot = pivot_py
    reduce_one = reduce_one_py
    reduce_remainder = reduce_remainder_py
    reduce_matrix = reduce_matrix_py


def n_words(n_bits):
    return max(1, (n_bits + 63) >> 6)


def pack(indices, width):
    """Bit-pack an iterable of row indices into a fresh column of ``width`` words."""
    col = np.zeros(width, dtype=np.uint64)
    one = np.uint64(1)
    for r in indices:
        col[r >> 6] ^= one << np.uint64(r & 63)
    return col


def unpack(col):
    """Sorted row indices of the set bits of ``col``."""
    out = []
    for w in np.flatnonzero(col):
        x = int(col[w])
        base = int(w) << 6
        while x:
            low = x & -x
            out.append(base + low.bit_length() - 1)
            x ^= low
    return out
