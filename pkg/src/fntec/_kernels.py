"""Compiled inner loops for the transform and pointwise products.

Every array passed in must hold reduced values in ``[0, 65536]`` so that a
product fits in 33 bits and the Fermat reduction ``lo - hi`` is exact:
``x = hi * 2**16 + lo = lo - hi (mod 2**16 + 1)``.
"""
import numba as nb
import numpy as np

P = 65537

_jit = nb.njit(cache=True, nogil=True, boundscheck=False)
_inline = nb.njit(inline="always")


@_inline
def mulmod(a, b):
    x = a * b
    v = (x & 0xFFFF) - (x >> 16)
    return v + P if v < 0 else v


@_inline
def _dif_block(lo, hi, w, h):
    for j in range(h):
        u = lo[j]
        v = hi[j]
        x = u + v
        lo[j] = x - P if x >= P else x
        y = u - v
        y = y + P if y < 0 else y
        hi[j] = mulmod(y, w[j])


@_inline
def _dit_block(lo, hi, w, h):
    for j in range(h):
        u = lo[j]
        v = mulmod(hi[j], w[j])
        x = u + v
        lo[j] = x - P if x >= P else x
        y = u - v
        hi[j] = y + P if y < 0 else y


@_inline
def _addm(a, b):
    x = a + b
    return x - P if x >= P else x


@_inline
def _subm(a, b):
    x = a - b
    return x + P if x < 0 else x


@_jit
def dif_rows(a, tws):
    """In-place decimation-in-frequency transform of every row.

    Natural-order input, bit-reversed output.  ``tws[h + j]`` is the
    ``j``-th power of the root of order ``2h``.
    """
    m, n = a.shape
    for r in range(m):
        t = a[r]
        h = n // 2
        while h >= 8:
            w = tws[h:2 * h]
            for s in range(0, n, 2 * h):
                _dif_block(t[s:s + h], t[s + h:s + 2 * h], w, h)
            h //= 2
        if n >= 8:
            _dif_tail8(t, tws)
        else:
            while h >= 1:
                for s in range(0, n, 2 * h):
                    for j in range(h):
                        u = t[s + j]
                        v = t[s + j + h]
                        t[s + j] = _addm(u, v)
                        t[s + j + h] = mulmod(_subm(u, v), tws[h + j])
                h //= 2


@_inline
def _dif_tail8(t, tws):
    # last three stages (h = 4, 2, 1) fused per block of eight
    w3 = tws[3]
    w5 = tws[5]
    w6 = tws[6]
    w7 = tws[7]
    for s in range(0, t.shape[0], 8):
        a0 = t[s]
        a1 = t[s + 1]
        a2 = t[s + 2]
        a3 = t[s + 3]
        a4 = t[s + 4]
        a5 = t[s + 5]
        a6 = t[s + 6]
        a7 = t[s + 7]
        b0 = _addm(a0, a4)
        b4 = _subm(a0, a4)
        b1 = _addm(a1, a5)
        b5 = mulmod(_subm(a1, a5), w5)
        b2 = _addm(a2, a6)
        b6 = mulmod(_subm(a2, a6), w6)
        b3 = _addm(a3, a7)
        b7 = mulmod(_subm(a3, a7), w7)
        c0 = _addm(b0, b2)
        c2 = _subm(b0, b2)
        c1 = _addm(b1, b3)
        c3 = mulmod(_subm(b1, b3), w3)
        c4 = _addm(b4, b6)
        c6 = _subm(b4, b6)
        c5 = _addm(b5, b7)
        c7 = mulmod(_subm(b5, b7), w3)
        t[s] = _addm(c0, c1)
        t[s + 1] = _subm(c0, c1)
        t[s + 2] = _addm(c2, c3)
        t[s + 3] = _subm(c2, c3)
        t[s + 4] = _addm(c4, c5)
        t[s + 5] = _subm(c4, c5)
        t[s + 6] = _addm(c6, c7)
        t[s + 7] = _subm(c6, c7)


@_inline
def _dit_head8(t, tws):
    # first three stages (h = 1, 2, 4) fused per block of eight
    w3 = tws[3]
    w5 = tws[5]
    w6 = tws[6]
    w7 = tws[7]
    for s in range(0, t.shape[0], 8):
        a0 = t[s]
        a1 = t[s + 1]
        a2 = t[s + 2]
        a3 = t[s + 3]
        a4 = t[s + 4]
        a5 = t[s + 5]
        a6 = t[s + 6]
        a7 = t[s + 7]
        b0 = _addm(a0, a1)
        b1 = _subm(a0, a1)
        b2 = _addm(a2, a3)
        b3 = _subm(a2, a3)
        b4 = _addm(a4, a5)
        b5 = _subm(a4, a5)
        b6 = _addm(a6, a7)
        b7 = _subm(a6, a7)
        c0 = _addm(b0, b2)
        c2 = _subm(b0, b2)
        v = mulmod(b3, w3)
        c1 = _addm(b1, v)
        c3 = _subm(b1, v)
        c4 = _addm(b4, b6)
        c6 = _subm(b4, b6)
        v = mulmod(b7, w3)
        c5 = _addm(b5, v)
        c7 = _subm(b5, v)
        t[s] = _addm(c0, c4)
        t[s + 4] = _subm(c0, c4)
        v = mulmod(c5, w5)
        t[s + 1] = _addm(c1, v)
        t[s + 5] = _subm(c1, v)
        v = mulmod(c6, w6)
        t[s + 2] = _addm(c2, v)
        t[s + 6] = _subm(c2, v)
        v = mulmod(c7, w7)
        t[s + 3] = _addm(c3, v)
        t[s + 7] = _subm(c3, v)


@_jit
def dit_rows(a, tws):
    """In-place decimation-in-time transform: bit-reversed in, natural out."""
    m, n = a.shape
    for r in range(m):
        t = a[r]
        if n >= 8:
            _dit_head8(t, tws)
            h = 8
        else:
            h = 1
            while h < n:
                for s in range(0, n, 2 * h):
                    for j in range(h):
                        u = t[s + j]
                        v = mulmod(t[s + j + h], tws[h + j])
                        t[s + j] = _addm(u, v)
                        t[s + j + h] = _subm(u, v)
                h *= 2
        while h < n:
            w = tws[h:2 * h]
            for s in range(0, n, 2 * h):
                _dit_block(t[s:s + h], t[s + h:s + 2 * h], w, h)
            h *= 2


@_jit
def mul_rows_vec(a, v):
    m, n = a.shape
    for r in range(m):
        t = a[r]
        for i in range(n):
            t[i] = mulmod(t[i], v[i])


@_jit
def mul_rows_rows(a, b):
    m, n = a.shape
    for r in range(m):
        t = a[r]
        u = b[r]
        for i in range(n):
            t[i] = mulmod(t[i], u[i])


@_jit
def gather_rows(src, idx, out):
    """``out[r, i] = src[r, idx[i]]`` for every column of ``out``."""
    m, c = out.shape
    for r in range(m):
        s = src[r]
        o = out[r]
        for i in range(c):
            o[i] = s[idx[i]]


@_jit
def scatter_scaled(src, factor, dest, out):
    """``out[r, dest[j]] = src[r, j] * factor[j]``."""
    m, c = src.shape
    for r in range(m):
        s = src[r]
        o = out[r]
        for j in range(c):
            o[dest[j]] = mulmod(s[j], factor[j])


@_jit
def gather_scaled(src, offset, factor, out):
    """``out[r, j] = src[r, offset + j] * factor[j]``."""
    m, c = out.shape
    for r in range(m):
        s = src[r]
        o = out[r]
        for j in range(c):
            o[j] = mulmod(s[offset + j], factor[j])


def warmup():
    """Trigger compilation (or a cache load) of every kernel."""
    a = np.ones((1, 16), dtype=np.int64)
    tws = np.ones(16, dtype=np.int64)
    dif_rows(a, tws)
    dit_rows(a, tws)
    mul_rows_vec(a, tws)
    mul_rows_rows(a, a)
    idx = np.arange(16, dtype=np.int64)
    gather_rows(a, idx, a.copy())
    scatter_scaled(a, tws, idx, a.copy())
    gather_scaled(a, 0, tws, a.copy())
