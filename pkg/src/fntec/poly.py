"""Dense polynomials over GF(65537).

A polynomial is a 1-D int64 array of coefficients in ascending degree.  The
canonical form has no trailing zeros, so the zero polynomial is the empty
array.  Functions that need a fixed-length operand (the middle product, the
batched helpers) say so and do not trim.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, field
from .errors import DuplicatePoint, ProductTooLarge, SizeMismatch
from .field import DTYPE, MAX_TRANSFORM_SIZE, P
from .transform import forward_bitrev, get_plan, inverse_from_bitrev

# Product-length thresholds of the multiplication dispatcher.
SCHOOLBOOK_LIMIT = 32
KARATSUBA_LIMIT = 64
# Operand length below which Karatsuba recursion falls back to schoolbook.
KARATSUBA_BASE = 8


def as_poly(coeffs):
    return trim(field.asarray(coeffs).reshape(-1))


def trim(a):
    a = np.asarray(a, dtype=DTYPE)
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if nz.size else a[:0]


def degree(a):
    """Degree of ``a``; -1 for the zero polynomial."""
    return len(trim(a)) - 1


def add(a, b):
    a, b = np.asarray(a, dtype=DTYPE), np.asarray(b, dtype=DTYPE)
    if len(a) < len(b):
        a, b = b, a
    out = a.copy()
    out[: len(b)] += b
    return trim(out % P)


def eval_horner(a, x):
    """``a(x)`` by Horner's rule; ``x`` may be an int or an int64 array."""
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=DTYPE) % P
    acc = np.zeros_like(x)
    for c in reversed(np.asarray(a, dtype=DTYPE).tolist()):
        acc = (acc * x + c) % P
    return int(acc) if scalar else acc


def derivative(a):
    a = np.asarray(a, dtype=DTYPE)
    if len(a) <= 1:
        return a[:0].copy()
    idx = np.arange(1, len(a), dtype=DTYPE) % P
    return trim(a[1:] * idx % P)


# -- multiplication --------------------------------------------------------------

def mul_schoolbook(a, b):
    a, b = trim(a), trim(b)
    if not len(a) or not len(b):
        return a[:0]
    # exact in int64: each term < 2**34, fewer than 2**29 terms
    return trim(np.convolve(a, b) % P)


def mul_karatsuba(a, b):
    a, b = trim(a), trim(b)
    if not len(a) or not len(b):
        return a[:0]
    out_len = len(a) + len(b) - 1
    n = max(len(a), len(b))
    a = np.pad(a, (0, n - len(a)))
    b = np.pad(b, (0, n - len(b)))
    return trim(_karatsuba(a, b)[:out_len])


def _karatsuba(a, b):
    # equal-length operands; result has length 2n - 1
    n = len(a)
    if n < KARATSUBA_BASE:
        return np.convolve(a, b) % P
    m = n // 2
    a0, a1 = a[:m], a[m:]
    b0, b1 = b[:m], b[m:]
    z0 = _karatsuba(a0, b0)
    z2 = _karatsuba(a1, b1)
    # a1 may be one longer than a0 when n is odd
    s_a = a1.copy()
    s_a[:m] += a0
    s_b = b1.copy()
    s_b[:m] += b0
    z1 = _karatsuba(s_a % P, s_b % P)
    z1[: len(z0)] -= z0
    z1[: len(z2)] -= z2
    out = np.zeros(2 * n - 1, dtype=DTYPE)
    out[: len(z0)] += z0
    out[m: m + len(z1)] += z1
    out[2 * m: 2 * m + len(z2)] += z2
    return out % P


def mul_fnt(a, b):
    """Product through transforms: two forward FNTs, a pointwise product and
    one inverse FNT of the next power-of-two size."""
    a, b = trim(a), trim(b)
    if not len(a) or not len(b):
        return a[:0]
    out_len = len(a) + len(b) - 1
    if out_len > MAX_TRANSFORM_SIZE:
        raise ProductTooLarge(f"product of length {out_len} exceeds the largest transform (65536)")
    size = field.next_power_of_two(out_len)
    plan = get_plan(size)
    buf = np.zeros((2, size), dtype=DTYPE)
    buf[0, : len(a)] = a
    buf[1, : len(b)] = b
    forward_bitrev(buf, plan)
    _kernels.mul_rows_rows(buf[:1], buf[1:])
    inverse_from_bitrev(buf[:1], plan)
    return trim(buf[0, :out_len])


def mul(a, b, tier=None):
    """Exact product, choosing schoolbook, Karatsuba or FNT by product length.

    ``tier`` forces one of ``"schoolbook"``, ``"karatsuba"`` or ``"fnt"``.
    """
    a, b = trim(a), trim(b)
    if not len(a) or not len(b):
        return a[:0]
    if tier is None:
        out_len = len(a) + len(b) - 1
        if out_len < SCHOOLBOOK_LIMIT:
            tier = "schoolbook"
        elif out_len < KARATSUBA_LIMIT:
            tier = "karatsuba"
        else:
            tier = "fnt"
    try:
        fn = {"schoolbook": mul_schoolbook, "karatsuba": mul_karatsuba, "fnt": mul_fnt}[tier]
    except KeyError:
        raise ValueError(f"unknown multiplication tier {tier!r}") from None
    return fn(a, b)


# -- cyclic convolution against a fixed operand --------------------------------

def prepare_spectrum(b, size, scale=1):
    """Bit-reversed transform of ``b`` zero-padded to ``size``, premultiplied by
    ``scale / size`` so that :func:`convolve_prepared` needs no extra pass."""
    b = np.asarray(b, dtype=DTYPE)
    if len(b) > size:
        raise SizeMismatch(f"operand of length {len(b)} does not fit a size-{size} transform")
    plan = get_plan(size)
    buf = np.zeros((1, size), dtype=DTYPE)
    buf[0, : len(b)] = b
    forward_bitrev(buf, plan)
    factor = plan.n_inverse * (scale % P) % P
    spec = buf[0] * factor % P
    spec.flags.writeable = False
    return spec


def convolve_prepared(rows, spectrum):
    """In-place cyclic convolution of every row with a prepared operand."""
    plan = get_plan(rows.shape[1])
    forward_bitrev(rows, plan)
    _kernels.mul_rows_vec(rows, spectrum)
    inverse_from_bitrev(rows, plan, scale=False)
    return rows


def middle_product(a, b):
    """Coefficients of degrees ``n-1 .. 2n-2`` of ``a * b``.

    ``a`` holds ``n`` coefficients (``n`` a power of two; a 2-D array is a
    batch of such operands) and ``b`` holds ``2n - 1``.  Uses transforms of
    size ``2n``: the cyclic wrap-around of the length ``3n - 2`` product only
    lands on degrees below ``n - 1``.
    """
    a = np.asarray(a, dtype=DTYPE)
    b = np.asarray(b, dtype=DTYPE)
    n = a.shape[-1]
    if not field.is_power_of_two(n) or a.ndim not in (1, 2) or b.shape != (2 * n - 1,):
        raise SizeMismatch(f"middle product needs n (a power of two) and 2n-1 coefficients, got {a.shape} and {b.shape}")
    if 2 * n > MAX_TRANSFORM_SIZE:
        raise ProductTooLarge(f"middle product of size {n} needs a transform of size {2 * n}")
    spec = prepare_spectrum(b % P, 2 * n)
    return middle_product_prepared(a, spec)


def middle_product_prepared(a, spectrum):
    a = np.asarray(a, dtype=DTYPE)
    n = a.shape[-1]
    rows = np.zeros((1 if a.ndim == 1 else a.shape[0], 2 * n), dtype=DTYPE)
    rows[:, :n] = a % P
    convolve_prepared(rows, spectrum)
    out = rows[:, n - 1: 2 * n - 1]
    return out[0].copy() if a.ndim == 1 else np.ascontiguousarray(out)


# -- subproduct tree -------------------------------------------------------------

def _mul_level(left, right):
    """Row-wise products of two equal-width batches of polynomials.

    Each row holds a polynomial of degree <= d in ``d + 1`` slots with ``d`` a
    power of two; results occupy ``2d + 1`` slots.
    """
    m, w = left.shape
    d = w - 1
    if 2 * w - 1 < KARATSUBA_LIMIT:
        out = np.zeros((m, 2 * w - 1), dtype=DTYPE)
        for i in range(w):
            out[:, i: i + w] += left[:, i: i + 1] * right
        return out % P
    # cyclic product of size 2d; only x**(2d) wraps, onto x**0
    plan = get_plan(2 * d)
    buf = np.zeros((2 * m, 2 * d), dtype=DTYPE)
    buf[:m, :w] = left
    buf[m:, :w] = right
    forward_bitrev(buf, plan)
    _kernels.mul_rows_rows(buf[:m], buf[m:])
    inverse_from_bitrev(buf[:m], plan)
    top = left[:, d] * right[:, d] % P
    out = np.zeros((m, 2 * d + 1), dtype=DTYPE)
    out[:, : 2 * d] = buf[:m]
    out[:, 0] = (out[:, 0] - top) % P
    out[:, 2 * d] = top
    return out


@dataclass(frozen=True, eq=False)
class SubproductTree:
    """All partial products of ``(x - x_j)``, level by level.

    ``levels[0]`` has one row ``[-x_j, 1]`` per point (padded with the
    constant 1 up to a power-of-two leaf count); ``levels[i]`` holds products
    of adjacent pairs from ``levels[i-1]``; the last level is ``A(x)``.
    """

    points: np.ndarray
    levels: list

    @property
    def root(self):
        return trim(self.levels[-1][0])


def subproduct_tree(points):
    points = np.asarray(points, dtype=DTYPE).reshape(-1) % P
    k = len(points)
    if k == 0:
        raise ValueError("subproduct tree needs at least one point")
    if len(np.unique(points)) != k:
        raise DuplicatePoint("evaluation points must be pairwise distinct")
    leaves = field.next_power_of_two(k)
    level = np.zeros((leaves, 2), dtype=DTYPE)
    level[:, 0] = 1
    level[:k, 0] = (P - points) % P
    level[:k, 1] = 1
    levels = [level]
    while level.shape[0] > 1:
        level = _mul_level(level[0::2], level[1::2])
        levels.append(level)
    return SubproductTree(points=points, levels=levels)
