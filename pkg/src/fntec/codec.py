"""MDS Reed-Solomon erasure code over GF(65537).

Codeword position ``i`` carries ``s(r**i)`` where ``r`` is the root of unity
of the code domain (the least power of two ``>= n``); positions at or beyond
``n`` are punctured.  The systematic variant evaluates the polynomial that
interpolates the source at positions ``0 .. k-1``.

All encoders take one source vector of ``k`` symbols or a 2-D batch with one
vector per row; the decoders take a :class:`Codeword` whose ``values`` follow
the same convention.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import field
from .errors import DuplicatePosition, NotEnoughSymbols, PositionOutOfRange, SizeMismatch
from .field import DTYPE, MAX_TRANSFORM_SIZE, P
from .interp import get_decode_plan, interpolate, lagrange_basis
from .transform import fnt_inverse, forward_natural, get_plan

# k at or below which the automatic path picks the quadratic algorithms
DIRECT_MAX_K = 256
PATHS = ("auto", "fast", "direct")


@dataclass(frozen=True)
class CodeParams:
    k: int
    n: int
    systematic: bool = True

    def __post_init__(self):
        if not (1 <= self.k <= self.n <= MAX_TRANSFORM_SIZE):
            raise ValueError(f"need 1 <= k <= n <= 65536, got k={self.k}, n={self.n}")

    @property
    def n_domain(self):
        return field.next_power_of_two(self.n)

    @property
    def root(self):
        return field.root_of_unity(self.n_domain)


@dataclass(frozen=True, eq=False)
class Codeword:
    """Received symbols: ``values[..., j]`` sits at code position ``positions[j]``."""

    positions: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=DTYPE).reshape(-1)
        vals = np.asarray(self.values, dtype=DTYPE)
        if vals.ndim not in (1, 2) or vals.shape[-1] != len(pos):
            raise SizeMismatch(f"{len(pos)} positions but values of shape {vals.shape}")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_pairs(cls, pairs):
        pairs = list(pairs)
        return cls([p for p, _ in pairs], [v for _, v in pairs])

    @classmethod
    def from_symbols(cls, symbols, erased=()):
        """Codeword built from a full encoding with the ``erased`` positions dropped."""
        symbols = np.asarray(symbols, dtype=DTYPE)
        keep = np.setdiff1d(np.arange(symbols.shape[-1]), np.asarray(erased, dtype=DTYPE))
        return cls(keep, symbols[..., keep])


def _rows(source, k):
    arr = np.asarray(source, dtype=DTYPE)
    if arr.ndim not in (1, 2) or arr.shape[-1] != k:
        raise SizeMismatch(f"expected {k} source symbols per codeword, got shape {arr.shape}")
    return np.ascontiguousarray(field.reduced(arr).reshape(-1, k)), arr.ndim


def _shape(rows, ndim):
    return rows[0] if ndim == 1 else rows


def _select(params, received):
    """The ``k`` lowest received positions, sorted, with their value columns."""
    pos = received.positions
    if len(pos) and (pos.min() < 0 or pos.max() >= params.n):
        raise PositionOutOfRange(f"received positions must lie in [0, {params.n})")
    if len(np.unique(pos)) != len(pos):
        raise DuplicatePosition("received positions must be distinct")
    if len(pos) < params.k:
        raise NotEnoughSymbols(f"need {params.k} symbols to decode, got {len(pos)}")
    order = np.argsort(pos, kind="stable")[: params.k]
    rows = received.values.reshape(-1, len(pos))[:, order] % P
    return pos[order], rows, received.values.ndim


def _check_path(path):
    if path not in PATHS:
        raise ValueError(f"path must be one of {PATHS}, got {path!r}")


def _evaluate(params, coeffs):
    """Evaluate coefficient rows (length <= n_domain) on the first n code points."""
    nd = params.n_domain
    buf = np.zeros((coeffs.shape[0], nd), dtype=DTYPE)
    buf[:, : coeffs.shape[1]] = coeffs
    return forward_natural(buf, get_plan(nd), params.n)


# -- non-systematic ------------------------------------------------------------

def encode_nonsystematic(params, source):
    """``e_i = s(r**i)``: one forward transform of the zero-padded source."""
    rows, ndim = _rows(source, params.k)
    return _shape(_evaluate(params, rows), ndim)


def decode_nonsystematic(params, received):
    pos, rows, ndim = _select(params, received)
    nd = params.n_domain
    if params.n == nd and len(received.positions) == nd:
        order = np.argsort(received.positions)
        full = received.values.reshape(-1, nd)[:, order]
        coeffs = fnt_inverse(get_plan(nd), full)[:, : params.k]
        return _shape(np.ascontiguousarray(coeffs), ndim)
    plan = get_decode_plan(nd, pos)
    return _shape(interpolate(plan, rows), ndim)


# -- systematic, transform based ---------------------------------------------------

def _systematic_plan(params):
    return get_decode_plan(params.n_domain, range(params.k))


def encode_systematic(params, source):
    """Interpolate the source at positions ``0..k-1`` to get the intermediate
    symbols, then evaluate them on the whole code domain."""
    rows, ndim = _rows(source, params.k)
    intermediate = interpolate(_systematic_plan(params), rows)
    return _shape(_evaluate(params, intermediate), ndim)


def decode_systematic(params, received):
    pos, rows, ndim = _select(params, received)
    if pos[-1] == params.k - 1:
        # the k lowest positions are exactly the systematic ones
        return _shape(rows, ndim)
    intermediate = interpolate(get_decode_plan(params.n_domain, pos), rows)
    full = _evaluate(params, intermediate)
    return _shape(np.ascontiguousarray(full[:, : params.k]), ndim)


# -- quadratic variants -------------------------------------------------------------

def _denominator_inv(xs):
    """``1 / prod_{j != i} (x_i - x_j)`` for every ``i``; quadratic."""
    denom = np.ones(len(xs), dtype=DTYPE)
    for j, x in enumerate(xs.tolist()):
        diff = (xs - x) % P
        diff[j] = 1
        denom = denom * diff % P
    return field.inv_array(denom)


def _barycentric_blocks(xs, ys, block=512):
    """Yield ``(start, W)`` with ``W[p, i] = L_i(ys[start + p])``, the Lagrange
    basis on nodes ``xs`` evaluated at targets ``ys`` (disjoint from ``xs``)."""
    dinv = _denominator_inv(xs)
    for start in range(0, len(ys), block):
        y = ys[start: start + block]
        diff = (y[:, None] - xs[None, :]) % P
        A_at_y = np.ones(len(y), dtype=DTYPE)
        for j in range(len(xs)):
            A_at_y = A_at_y * diff[:, j] % P
        W = field.inv_array(diff) * dinv[None, :] % P
        yield start, W * A_at_y[:, None] % P


@functools.lru_cache(maxsize=8)
def _parity_weights(n_domain, k, n):
    pts = field.powers(field.root_of_unity(n_domain), n)
    return np.concatenate([W for _, W in _barycentric_blocks(pts[:k], pts[k:])]) if n > k else np.zeros((0, k), DTYPE)


def encode_systematic_direct(params, source):
    """Parity symbols from the Lagrange form at each parity point: ``O((n-k) k)``."""
    rows, ndim = _rows(source, params.k)
    k, n = params.k, params.n
    out = np.empty((rows.shape[0], n), dtype=DTYPE)
    out[:, :k] = rows
    if (n - k) * k <= 1 << 22:
        if n > k:
            out[:, k:] = field.matmul(rows, _parity_weights(params.n_domain, k, n).T)
    else:
        pts = field.powers(params.root, n)
        for start, W in _barycentric_blocks(pts[:k], pts[k:]):
            out[:, k + start: k + start + W.shape[0]] = field.matmul(rows, W.T)
    return _shape(out, ndim)


@functools.lru_cache(maxsize=8)
def _systematic_basis(n_domain, k):
    return lagrange_basis(field.powers(field.root_of_unity(n_domain), k))


def encode_systematic_intermediate_direct(params, source):
    """Intermediate symbols by a quadratic Lagrange product, then one transform."""
    rows, ndim = _rows(source, params.k)
    intermediate = field.matmul(rows, _systematic_basis(params.n_domain, params.k))
    return _shape(_evaluate(params, intermediate), ndim)


def decode_direct(params, received):
    """Quadratic decoder.  Systematic codes only rebuild the missing source
    symbols; non-systematic codes solve for the coefficients."""
    pos, rows, ndim = _select(params, received)
    k = params.k
    pts = field.powers(params.root, params.n)
    if not params.systematic:
        return _shape(field.matmul(rows, lagrange_basis(pts[pos])), ndim)
    out = np.empty((rows.shape[0], k), dtype=DTYPE)
    present = pos[pos < k]
    out[:, present] = rows[:, : len(present)]
    missing = np.setdiff1d(np.arange(k), present)
    if not len(missing):
        return _shape(out, ndim)
    if len(missing) * k <= 1 << 22:
        W = _recovery_weights(params.n_domain, params.n, tuple(pos.tolist()), tuple(missing.tolist()))
        out[:, missing] = field.matmul(rows, W.T)
    else:
        for start, W in _barycentric_blocks(pts[pos], pts[missing]):
            out[:, missing[start: start + W.shape[0]]] = field.matmul(rows, W.T)
    return _shape(out, ndim)


@functools.lru_cache(maxsize=16)
def _recovery_weights(n_domain, n, positions, missing):
    pts = field.powers(field.root_of_unity(n_domain), n)
    return np.concatenate([W for _, W in _barycentric_blocks(pts[list(positions)], pts[list(missing)])])


# -- dispatch -----------------------------------------------------------------------

def _use_direct(params, path):
    _check_path(path)
    return path == "direct" or (path == "auto" and params.k <= DIRECT_MAX_K)


def encode(params, source, path="auto"):
    if not params.systematic:
        _check_path(path)
        return encode_nonsystematic(params, source)
    if _use_direct(params, path):
        return encode_systematic_direct(params, source)
    return encode_systematic(params, source)


def decode(params, received, path="auto"):
    if _use_direct(params, path):
        return decode_direct(params, received)
    if params.systematic:
        return decode_systematic(params, received)
    return decode_nonsystematic(params, received)
