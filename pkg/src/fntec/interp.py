"""Fast Lagrange interpolation on a subset of the powers of a root of unity.

Writing ``A(x) = prod (x - x_i)`` and ``A_i = A / (x - x_i)``, the
interpolating polynomial is ``P = A * sum n_i / (x - x_i)`` with
``n_i = v_i / A'(x_i)``.  As a power series,

    sum n_i / (x - x_i) = -sum_j N(r**(-j-1)) x**j,    N(x) = sum n_i x**z_i,

where ``x_i = r**z_i``.  Everything that depends only on the positions
``z_i`` (``A``, ``A'(x_i)``, chirp tables, transforms of fixed operands) is
gathered in a :class:`DecodePlan` and reused for every codeword.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import _kernels, field
from .errors import (DuplicatePoint, DuplicatePosition, PositionOutOfRange,
                     SizeMismatch, TooFewPositions)
from .field import DTYPE, P
from .geom import ChirpTable, build_chirp, geom_eval, geom_eval_negative
from .poly import (SubproductTree, convolve_prepared, derivative, prepare_spectrum,
                   subproduct_tree, trim)

PLAN_CACHE_SIZE = 16


@dataclass(frozen=True, eq=False)
class DecodePlan:
    n: int
    k: int
    positions: np.ndarray
    points: np.ndarray
    A: np.ndarray
    A_tree: SubproductTree
    Aprime_at_x_inv: np.ndarray
    chirp: ChirpTable
    # table for the inverse root, used by the series step
    inverse_chirp: ChirpTable
    # transform of the k low coefficients of -A for the final truncated product
    A_low_spectrum: np.ndarray


def _check_positions(n, positions):
    if not field.is_power_of_two(n) or n > field.MAX_TRANSFORM_SIZE:
        raise SizeMismatch(f"code domain size must be a power of two <= 65536, got {n}")
    z = np.asarray(positions, dtype=DTYPE).reshape(-1)
    if len(z) == 0:
        raise TooFewPositions("at least one position is required")
    if z.min() < 0 or z.max() >= n:
        raise PositionOutOfRange(f"positions must lie in [0, {n})")
    if len(np.unique(z)) != len(z):
        raise DuplicatePosition("positions must be distinct")
    return z


def build_plan(n, positions):
    """Position-only precomputation: ``A``, ``A'`` and ``1 / A'(x_i)``."""
    z = _check_positions(n, positions)
    k = len(z)
    root = field.root_of_unity(n)
    points = field.powers(root, n)[z]
    tree = subproduct_tree(points)
    A = tree.root
    chirp = build_chirp(n, root)
    # A'(x_i) = A_i(x_i); read off the evaluation on the whole progression
    Aprime_values = geom_eval(derivative(A), chirp)[z]
    size = field.next_power_of_two(2 * k - 1)
    for arr in (z, points):
        arr.flags.writeable = False
    return DecodePlan(
        n=n, k=k, positions=z, points=points, A=A, A_tree=tree,
        Aprime_at_x_inv=field.inv_array(Aprime_values),
        chirp=chirp,
        inverse_chirp=build_chirp(n, field.inv(root)),
        A_low_spectrum=prepare_spectrum(A[:k], size, scale=P - 1),
    )


@functools.lru_cache(maxsize=PLAN_CACHE_SIZE)
def _cached_plan(n, positions):
    return build_plan(n, positions)


def get_decode_plan(n, positions):
    """:func:`build_plan` behind a small LRU cache keyed by the position set."""
    return _cached_plan(int(n), tuple(int(p) for p in positions))


def clear_plan_cache():
    _cached_plan.cache_clear()


def interpolate(plan, values):
    """Coefficients (``k`` of them) of the polynomial taking ``values[i]`` at
    ``x_i``.  ``values`` may be a batch with one codeword per row."""
    v = np.asarray(values, dtype=DTYPE)
    if v.ndim not in (1, 2) or v.shape[-1] != plan.k:
        raise SizeMismatch(f"expected {plan.k} values per codeword, got shape {v.shape}")
    rows = np.ascontiguousarray(field.reduced(v).reshape(-1, plan.k))
    n, k = plan.n, plan.k
    # step 4, then N(x) as a dense polynomial supported on the positions
    dense = np.zeros((rows.shape[0], n), dtype=DTYPE)
    _kernels.scatter_scaled(rows, plan.Aprime_at_x_inv, plan.positions, dense)
    # step 5: only the first k series terms reach P, which has degree < k
    series = geom_eval_negative(dense, plan.chirp, count=k, inverse_table=plan.inverse_chirp)
    size = len(plan.A_low_spectrum)
    buf = np.zeros((rows.shape[0], size), dtype=DTYPE)
    buf[:, :k] = series
    # step 6: P = A * (-series) mod x**k, the sign folded into the spectrum
    convolve_prepared(buf, plan.A_low_spectrum)
    out = buf[:, :k]
    return out[0].copy() if v.ndim == 1 else np.ascontiguousarray(out)


# -- quadratic reference -----------------------------------------------------------

def lagrange_basis(xs):
    """``k x k`` matrix whose row ``i`` holds the coefficients of the Lagrange
    basis polynomial ``prod_{j != i} (x - x_j) / (x_i - x_j)``."""
    xs = np.asarray(xs, dtype=DTYPE).reshape(-1) % P
    k = len(xs)
    if len(np.unique(xs)) != k:
        raise DuplicatePoint("interpolation points must be distinct")
    # A(x) = prod (x - x_j), one factor at a time
    A = np.zeros(k + 1, dtype=DTYPE)
    A[0] = 1
    for j, x in enumerate(xs.tolist()):
        # multiply by (x - x_j): shift up and subtract x_j times the old poly
        shifted = np.zeros(k + 1, dtype=DTYPE)
        shifted[1:] = A[:-1]
        A = (shifted - x * A) % P
    # synthetic division A / (x - x_i) for every i at once
    Q = np.zeros((k, k), dtype=DTYPE)
    carry = np.zeros(k, dtype=DTYPE)
    for m in range(k, 0, -1):
        carry = (A[m] + xs * carry) % P
        Q[:, m - 1] = carry
    denom = np.ones(k, dtype=DTYPE)
    for j, x in enumerate(xs.tolist()):
        diff = (xs - x) % P
        diff[j] = 1
        denom = denom * diff % P
    return Q * field.inv_array(denom)[:, None] % P


def lagrange_oracle(points):
    """Classical quadratic Lagrange interpolation of ``(x, v)`` pairs."""
    points = list(points)
    if not points:
        raise TooFewPositions("at least one point is required")
    xs = [int(x) for x, _ in points]
    vs = np.array([int(v) % P for _, v in points], dtype=DTYPE)
    return trim(field.matmul(vs, lagrange_basis(xs)))
