"""Evaluation of a polynomial on a geometric progression ``1, r, r**2, ...``.

With ``t_i = i(i-1)/2`` one has ``i*j = t_(i+j) - t_i - t_j``, so

    a(r**i) = (1 / b_i) * sum_j (a_j / b_j) * b_(i+j),     b_i = r**t_i,

which is a middle product of the reversed, rescaled coefficients against the
sequence ``b``.  That costs three transforms of size ``2n``, one of which
(the transform of ``b``) is cached on the table.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import _kernels, field
from .errors import SizeMismatch
from .field import DTYPE, GROUP_ORDER, MAX_TRANSFORM_SIZE, P
from .poly import convolve_prepared, prepare_spectrum
from .transform import fnt_inverse, forward_natural, get_plan


@dataclass(frozen=True, eq=False)
class ChirpTable:
    """Precomputed weights for evaluating on ``root**0 .. root**(n-1)``.

    ``b`` and ``b_inverse`` are sized for the padded power-of-two length
    ``width`` (``2*width - 1`` and ``width`` entries).  ``spectrum`` is the
    prepared transform of ``b``; it is ``None`` when ``2*width`` exceeds the
    largest transform, in which case ``root`` must generate the full cycle of
    order ``n`` and evaluation is a plain transform.
    """

    n: int
    root: int
    width: int
    b: np.ndarray
    b_inverse: np.ndarray
    spectrum: np.ndarray | None

    @functools.cached_property
    def reversal(self):
        return np.arange(self.width - 1, -1, -1, dtype=DTYPE)

    @functools.cached_property
    def step_powers(self):
        """``root**j`` for ``j < width``."""
        return field.powers(self.root, self.width)


def chirp_exponents(count):
    """``t_i = i(i-1)/2`` reduced modulo the group order 65536."""
    i = np.arange(count, dtype=DTYPE)
    return (i * (i - 1) // 2) % GROUP_ORDER


@functools.lru_cache(maxsize=64)
def build_chirp(n, root):
    if n < 1:
        raise ValueError("chirp table needs n >= 1")
    root %= P
    width = field.next_power_of_two(n)
    if 2 * width > MAX_TRANSFORM_SIZE:
        plan = get_plan(width)
        if n != width or root not in (plan.root, plan.inverse_root):
            raise SizeMismatch(
                f"a geometric evaluation of {n} points needs a size-{2 * width} transform "
                "unless the points form the full cycle of roots of unity")
        return ChirpTable(n, root, width, np.empty(0, DTYPE), np.empty(0, DTYPE), None)
    t = chirp_exponents(2 * width - 1)
    # b_i = root**t_i, built from the recurrence b_(i+1) = root**i * b_i
    steps = field.powers(root, 2 * width - 2)
    b = np.empty(2 * width - 1, dtype=DTYPE)
    b[0] = 1
    acc = 1
    for i in range(1, 2 * width - 1):
        acc = acc * int(steps[i - 1]) % P
        b[i] = acc
    b_inverse = field.inv_array(b[:width])
    for arr in (b, b_inverse):
        arr.flags.writeable = False
    return ChirpTable(n, root, width, b, b_inverse, prepare_spectrum(b, 2 * width))


def _coeff_rows(a, width):
    a = field.reduced(a)
    if a.ndim not in (1, 2) or a.shape[-1] > width:
        raise SizeMismatch(f"polynomial with {a.shape[-1]} coefficients does not fit {width} evaluation points")
    return np.ascontiguousarray(a.reshape(-1, a.shape[-1])), a.ndim


def _eval_rows(rows, table, prescale, count):
    """Evaluate coefficient rows (at most ``table.width`` columns) on the first
    ``count`` points; coefficient ``j`` is first multiplied by ``prescale[j]``."""
    m, c = rows.shape
    w = table.width
    if table.spectrum is None:
        buf = np.zeros((m, w), dtype=DTYPE)
        _kernels.scatter_scaled(rows, prescale, np.arange(c, dtype=DTYPE), buf)
        plan = get_plan(w)
        if table.root == plan.root:
            return forward_natural(buf, plan, count)
        # sum_j a_j r**(-ij) is n times the inverse transform
        out = fnt_inverse(plan, buf)[:, :count] * (w % P) % P
        return np.ascontiguousarray(out)
    # reversed, rescaled coefficients against b: the middle product
    buf = np.zeros((m, 2 * w), dtype=DTYPE)
    _kernels.scatter_scaled(rows, prescale * table.b_inverse[:c] % P, table.reversal[:c], buf)
    convolve_prepared(buf, table.spectrum)
    out = np.empty((m, count), dtype=DTYPE)
    _kernels.gather_scaled(buf, w - 1, table.b_inverse, out)
    return out


def geom_eval(a, table):
    """``(a(root**0), ..., a(root**(n-1)))``; ``a`` may be a batch of rows."""
    rows, ndim = _coeff_rows(a, table.width)
    out = _eval_rows(rows, table, np.ones(rows.shape[1], dtype=DTYPE), table.n)
    return out[0] if ndim == 1 else out


def geom_eval_negative(a, table, count=None, inverse_table=None):
    """``(a(r**-1), a(r**-2), ..., a(r**-count))`` for the table's root ``r``;
    ``count`` defaults to ``n``.  ``inverse_table`` (the table for ``r**-1``)
    is looked up when not supplied.

    Evaluates ``a(x / r)`` on the progression of ``r**-1``: scaling coefficient
    ``m`` by ``r**-m`` shifts every point by one step.
    """
    count = table.n if count is None else count
    if not 0 <= count <= table.n:
        raise SizeMismatch(f"cannot take {count} of {table.n} evaluations")
    if inverse_table is None:
        inverse_table = build_chirp(table.n, field.inv(table.root))
    rows, ndim = _coeff_rows(a, inverse_table.width)
    out = _eval_rows(rows, inverse_table, inverse_table.step_powers[: rows.shape[1]], count)
    return out[0] if ndim == 1 else out
