"""Fermat Number Transform: the radix-2 FFT over GF(65537).

Transforms act on the last axis, so a 2-D array is a batch of independent
vectors (one codeword or polynomial per row).  Every executed transform is
reported to the active :class:`FntCounter` scopes.
"""
from __future__ import annotations

import contextlib
import contextvars
import functools
from collections import Counter
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import _kernels, field
from .errors import SizeMismatch
from .field import DTYPE, P

__all__ = [
    "FntCounter", "TransformPlan", "count_fnts", "fnt_forward", "fnt_inverse",
    "get_plan", "naive_dft",
]


# -- instrumentation -----------------------------------------------------------

@dataclass
class FntCounter:
    """Number of executed transforms, keyed by transform size."""

    counts: Counter = dc_field(default_factory=Counter)

    def add(self, size, times=1):
        self.counts[size] += times

    def total(self):
        return sum(self.counts.values())

    def equivalents(self, n):
        """Work expressed in size-``n`` transforms, counting a size-``m``
        transform as ``m / n`` of them (so one of size ``2n`` counts twice)."""
        return sum(size * c for size, c in self.counts.items()) / n


_active_counters: contextvars.ContextVar[tuple] = contextvars.ContextVar("fnt_counters", default=())


@contextlib.contextmanager
def count_fnts():
    """Scope in which executed transforms are tallied.

    >>> with count_fnts() as c:
    ...     _ = fnt_forward(get_plan(8), np.zeros(8, dtype=np.int64))
    >>> c.counts[8]
    1
    """
    counter = FntCounter()
    token = _active_counters.set(_active_counters.get() + (counter,))
    try:
        yield counter
    finally:
        _active_counters.reset(token)


def _record(size, times):
    for counter in _active_counters.get():
        counter.add(size, times)


# -- plans -----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TransformPlan:
    size: int
    root: int
    inverse_root: int
    n_inverse: int
    twiddles: np.ndarray
    bit_reversal: np.ndarray
    stage_twiddles: np.ndarray = dc_field(repr=False)
    inverse_stage_twiddles: np.ndarray = dc_field(repr=False)


def _stage_table(powers_, n):
    # entry h + j holds root_{2h}**j = root_n**(j * n / 2h)
    table = np.ones(max(n, 1), dtype=DTYPE)
    h = 1
    while h < n:
        table[h:2 * h] = powers_[::n // (2 * h)][:h]
        h *= 2
    return table


def _bit_reversal(n):
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


@functools.lru_cache(maxsize=None)
def get_plan(n):
    """Cached :class:`TransformPlan` for power-of-two size ``n``."""
    root = field.root_of_unity(n)
    inverse_root = field.inv(root)
    twiddles = field.powers(root, n // 2)
    inverse_twiddles = field.powers(inverse_root, n // 2)
    for arr in (twiddles, inverse_twiddles):
        arr.flags.writeable = False
    plan = TransformPlan(
        size=n,
        root=root,
        inverse_root=inverse_root,
        n_inverse=field.inv(n % P),
        twiddles=twiddles,
        bit_reversal=_bit_reversal(n),
        stage_twiddles=_stage_table(twiddles, n),
        inverse_stage_twiddles=_stage_table(inverse_twiddles, n),
    )
    return plan


# -- batch primitives (operate in place on C-contiguous 2-D int64 arrays) -----

def forward_bitrev(rows, plan):
    """Forward transform in place, leaving the output in bit-reversed order."""
    _kernels.dif_rows(rows, plan.stage_twiddles)
    _record(plan.size, rows.shape[0])
    return rows


def inverse_from_bitrev(rows, plan, scale=True):
    """Inverse transform in place of bit-reversed input; natural-order output."""
    _kernels.dit_rows(rows, plan.inverse_stage_twiddles)
    _record(plan.size, rows.shape[0])
    if scale and plan.size > 1:
        _kernels.mul_rows_vec(rows, np.full(plan.size, plan.n_inverse, dtype=DTYPE))
    return rows


def _as_rows(a, n):
    arr = np.asarray(a)
    if arr.ndim not in (1, 2) or arr.shape[-1] != n:
        raise SizeMismatch(f"expected vectors of length {n}, got shape {arr.shape}")
    rows = np.array(field.reduced(arr), dtype=DTYPE, order="C", ndmin=2, copy=True)
    return rows, arr.ndim


def fnt_forward(plan, a):
    """``A_j = sum_i a_i r**(i*j)`` for every row of ``a``."""
    rows, ndim = _as_rows(a, plan.size)
    out = forward_natural(rows, plan)
    return out[0] if ndim == 1 else out


def forward_natural(rows, plan, count=None):
    """Forward transform of ``rows`` (clobbered); the first ``count`` outputs
    in natural order."""
    forward_bitrev(rows, plan)
    out = np.empty((rows.shape[0], plan.size if count is None else count), dtype=DTYPE)
    _kernels.gather_rows(rows, plan.bit_reversal, out)
    return out


def fnt_inverse(plan, A):
    """Exact inverse of :func:`fnt_forward` (includes the ``1/n`` factor)."""
    src, ndim = _as_rows(A, plan.size)
    rows = np.empty_like(src)
    _kernels.gather_rows(src, plan.bit_reversal, rows)
    inverse_from_bitrev(rows, plan)
    return rows[0] if ndim == 1 else rows


def naive_dft(root, a, inverse=False):
    """Quadratic reference DFT of a single vector using Python integers.

    ``root`` must have multiplicative order ``len(a)``.  With ``inverse`` the
    sum uses ``root**-1`` and is scaled by ``1/len(a)``.
    """
    a = [int(x) % P for x in a]
    n = len(a)
    if n == 0:
        return []
    w = field.inv(root) if inverse else root % P
    out = []
    for j in range(n):
        wj = field.pow(w, j) if j else 1
        acc = 0
        x = 1
        for ai in a:
            acc += ai * x
            x = x * wj % P
        out.append(acc % P)
    if inverse:
        n_inv = field.inv(n % P)
        out = [v * n_inv % P for v in out]
    return out
