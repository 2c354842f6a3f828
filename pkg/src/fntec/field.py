"""Arithmetic in GF(65537), the field of the Fermat prime 2**16 + 1.

Elements are plain Python ints (or int64 numpy arrays for the vectorized
helpers) in ``[0, 65536]``.  Note that 65536 is a valid element, so 16-bit
storage is not enough.
"""
import numpy as np

from .errors import InvalidTransformSize, ZeroInverse

P = 65537
GENERATOR = 3
GROUP_ORDER = P - 1  # 2**16
MAX_TRANSFORM_SIZE = GROUP_ORDER

DTYPE = np.int64


def add(a, b):
    s = a + b
    return s - P if s >= P else s


def sub(a, b):
    # a + (p - b) keeps intermediates non-negative
    return add(a, P - b) if b else a


def neg(a):
    return P - a if a else 0


def mul(a, b):
    return (a * b) % P


def pow(a, e):
    """Square-and-multiply exponentiation ``a**e mod p``."""
    if e < 0:
        raise ValueError("negative exponent")
    if e == 0 and a % P == 0:
        raise ValueError("0**0 is undefined")
    result = 1
    base = a % P
    while e:
        if e & 1:
            result = result * base % P
        base = base * base % P
        e >>= 1
    return result


def inv(a):
    a %= P
    if a == 0:
        raise ZeroInverse("0 has no multiplicative inverse")
    return pow(a, P - 2)


def is_power_of_two(n):
    return n >= 1 and n & (n - 1) == 0


def next_power_of_two(n):
    return 1 if n <= 1 else 1 << (n - 1).bit_length()


def root_of_unity(n, inverse=False):
    """Element of exact multiplicative order ``n`` (a power of two).

    This is ``3**(65536 / n)``, or its inverse when ``inverse`` is set.
    """
    if not isinstance(n, (int, np.integer)) or not is_power_of_two(n) or n > MAX_TRANSFORM_SIZE:
        raise InvalidTransformSize(f"transform size must be a power of two in [1, 65536], got {n!r}")
    r = pow(GENERATOR, GROUP_ORDER // int(n))
    return inv(r) if inverse else r


# -- vectorized helpers -------------------------------------------------------

def asarray(values):
    """Coerce to an int64 array reduced into ``[0, p)``."""
    return np.asarray(values, dtype=DTYPE) % P


def reduced(values):
    """int64 array view of ``values``, reduced only when something is out of range."""
    arr = np.asarray(values, dtype=DTYPE)
    if arr.size and (arr.min() < 0 or arr.max() >= P):
        arr = arr % P
    return arr


def pow_array(a, e):
    """Elementwise ``a**e`` for an array base and a scalar exponent."""
    base = np.asarray(a, dtype=DTYPE) % P
    result = np.ones_like(base)
    while e:
        if e & 1:
            result = result * base % P
        base = base * base % P
        e >>= 1
    return result


def inv_array(a):
    a = np.asarray(a, dtype=DTYPE) % P
    if np.any(a == 0):
        raise ZeroInverse("0 has no multiplicative inverse")
    return pow_array(a, P - 2)


def powers(x, count):
    """``[1, x, x**2, ..., x**(count-1)]`` as an int64 array."""
    out = np.empty(count, dtype=DTYPE)
    if count:
        out[0] = 1
    # doubling: block [m, 2m) is block [0, m) times x**m
    m = 1
    while m < count:
        step = pow(x, m)
        take = min(m, count - m)
        out[m:m + take] = out[:take] * step % P
        m += take
    return out


def matmul(a, b):
    """Exact ``a @ b mod p`` for reduced int64 matrices.

    Runs through float64 BLAS: every partial sum is an integer below
    ``2**34 * K``, exact in a double while the inner dimension ``K`` stays
    under ``2**19``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    inner = a.shape[-1]
    block = 1 << 18
    out = None
    for start in range(0, inner, block):
        part = np.matmul(a[..., start:start + block].astype(np.float64),
                         b[start:start + block].astype(np.float64))
        part = np.fmod(part, P).astype(DTYPE)
        out = part if out is None else (out + part) % P
    return out
