"""Byte streams to field symbols, and the shard / manifest file formats.

Shard layout (all integers big-endian)::

    magic "FNTC" | version u8 = 1 | chunk_id u64 | k u16 | n u16 | shard_index u16
    | flags u8 | payload_symbols u32 | escape_count u16 | escape_count x u32
    | payload_symbols x u16

``k`` or ``n`` equal to 65536 is stored as 0.  A payload symbol equal to 65536 does not fit
16 bits: it is written as 0x0000 and its index is listed in the escape table.

Manifest layout::

    magic "FNTM" | version u8 = 1 | chunk_id u64 | original_length u64 | k u16
    | n u16 | stripes u32 | flags u8
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import (BadMagic, BadVersion, LengthMismatch, MalformedEscapes, MalformedHeader,
                     TooManyEscapes, TruncatedShard)
from .field import DTYPE, P

SHARD_MAGIC = b"FNTC"
MANIFEST_MAGIC = b"FNTM"
VERSION = 1
FLAG_SYSTEMATIC = 0x01
ESCAPE_VALUE = P - 1  # 65536, the one element that needs 17 bits

_SHARD_HEAD = struct.Struct(">4sBQHHHBIH")
_MANIFEST = struct.Struct(">4sBQQHHIB")


def _pack_count(n):
    if not 1 <= n <= 65536:
        raise ValueError(f"k and n must lie in [1, 65536], got {n}")
    return n & 0xFFFF


def _unpack_count(raw):
    return raw or 65536


@dataclass(frozen=True)
class ShardHeader:
    chunk_id: int
    k: int
    n: int
    shard_index: int
    flags: int = FLAG_SYSTEMATIC
    payload_symbols: int = 0
    escape_positions: tuple = ()
    version: int = VERSION

    @property
    def systematic(self):
        return bool(self.flags & FLAG_SYSTEMATIC)

    @property
    def escape_count(self):
        return len(self.escape_positions)


@dataclass(frozen=True)
class ChunkManifest:
    chunk_id: int
    original_length: int
    k: int
    n: int
    stripes: int
    flags: int = FLAG_SYSTEMATIC
    version: int = VERSION

    @property
    def systematic(self):
        return bool(self.flags & FLAG_SYSTEMATIC)


# -- symbols ----------------------------------------------------------------------

def symbolize(data, k):
    """Split ``data`` into big-endian 16-bit words laid out as ``(stripes, k)``.

    Word ``t*k + i`` becomes source symbol ``i`` of stripe ``t``; the tail is
    zero-padded to whole stripes.
    """
    data = bytes(data)
    stripe_bytes = 2 * k
    stripes = -(-len(data) // stripe_bytes)
    buf = data + bytes(stripes * stripe_bytes - len(data))
    words = np.frombuffer(buf, dtype=">u2").astype(DTYPE)
    return words.reshape(stripes, k)


def desymbolize(matrix, original_length):
    """Inverse of :func:`symbolize`, truncated to ``original_length`` bytes."""
    matrix = np.asarray(matrix, dtype=DTYPE)
    capacity = matrix.size * 2
    stripe_bytes = 2 * matrix.shape[-1] if matrix.ndim == 2 else capacity
    # only the last stripe may carry padding
    if not 0 <= original_length <= capacity or capacity - original_length >= max(stripe_bytes, 1):
        raise LengthMismatch(f"{original_length} bytes cannot come from {matrix.shape} symbols")
    if matrix.size and (matrix.min() < 0 or matrix.max() > 0xFFFF):
        raise LengthMismatch("source symbols must be 16-bit values")
    return matrix.astype(">u2").tobytes()[:original_length]


# -- shards ------------------------------------------------------------------------

def write_shard(header, payload):
    """Serialize ``header`` and ``payload``; the escape table in ``header`` is
    ignored and recomputed from the payload."""
    payload = np.asarray(payload, dtype=DTYPE).reshape(-1)
    if payload.size and (payload.min() < 0 or payload.max() > ESCAPE_VALUE):
        raise ValueError("payload symbols must lie in [0, 65536]")
    escapes = np.flatnonzero(payload == ESCAPE_VALUE)
    if len(escapes) > 0xFFFF:
        raise TooManyEscapes(f"{len(escapes)} escaped symbols exceed the 65535 limit of one shard")
    if not 0 <= header.shard_index < header.n:
        raise ValueError(f"shard index {header.shard_index} outside [0, {header.n})")
    words = np.where(payload == ESCAPE_VALUE, 0, payload).astype(">u2")
    head = _SHARD_HEAD.pack(SHARD_MAGIC, VERSION, header.chunk_id, _pack_count(header.k), _pack_count(header.n),
                            header.shard_index, header.flags, len(payload), len(escapes))
    return head + escapes.astype(">u4").tobytes() + words.tobytes()


def read_shard(data):
    """Parse a shard; returns ``(ShardHeader, payload)`` with escapes restored."""
    data = bytes(data)
    if len(data) < 4:
        raise TruncatedShard("shard shorter than its magic number")
    if data[:4] != SHARD_MAGIC:
        raise BadMagic(f"expected magic {SHARD_MAGIC!r}, got {data[:4]!r}")
    if len(data) < _SHARD_HEAD.size:
        raise TruncatedShard("shard header is truncated")
    _, version, chunk_id, k, n_raw, index, flags, count, n_esc = _SHARD_HEAD.unpack_from(data)
    if version != VERSION:
        raise BadVersion(f"unsupported shard version {version}")
    n = _unpack_count(n_raw)
    if index >= n:
        raise MalformedHeader(f"shard index {index} outside [0, {n})")
    esc_end = _SHARD_HEAD.size + 4 * n_esc
    if len(data) < esc_end + 2 * count:
        raise TruncatedShard(f"expected {esc_end + 2 * count} bytes, got {len(data)}")
    if len(data) > esc_end + 2 * count:
        raise MalformedHeader(f"{len(data) - esc_end - 2 * count} trailing bytes after the payload")
    escapes = np.frombuffer(data, dtype=">u4", count=n_esc, offset=_SHARD_HEAD.size).astype(DTYPE)
    if n_esc and (np.any(np.diff(escapes) <= 0) or escapes[-1] >= count):
        raise MalformedEscapes("escape positions must be strictly increasing and inside the payload")
    payload = np.frombuffer(data, dtype=">u2", count=count, offset=esc_end).astype(DTYPE)
    if n_esc and np.any(payload[escapes] != 0):
        raise MalformedEscapes("escaped symbols must be stored as 0")
    payload[escapes] = ESCAPE_VALUE
    header = ShardHeader(chunk_id, _unpack_count(k), n, index, flags, count, tuple(escapes.tolist()), version)
    return header, payload


# -- manifests ---------------------------------------------------------------------

def write_manifest(manifest):
    if manifest.original_length > manifest.stripes * manifest.k * 2:
        raise LengthMismatch("original length exceeds the stripe capacity")
    return _MANIFEST.pack(MANIFEST_MAGIC, VERSION, manifest.chunk_id, manifest.original_length,
                          _pack_count(manifest.k), _pack_count(manifest.n), manifest.stripes, manifest.flags)


def read_manifest(data):
    data = bytes(data)
    if len(data) >= 4 and data[:4] != MANIFEST_MAGIC:
        raise BadMagic(f"expected magic {MANIFEST_MAGIC!r}, got {data[:4]!r}")
    if len(data) != _MANIFEST.size:
        raise TruncatedShard(f"manifest must be {_MANIFEST.size} bytes, got {len(data)}")
    _, version, chunk_id, length, k, n_raw, stripes, flags = _MANIFEST.unpack(data)
    if version != VERSION:
        raise BadVersion(f"unsupported manifest version {version}")
    if length > stripes * _unpack_count(k) * 2:
        raise LengthMismatch("original length exceeds the stripe capacity")
    return ChunkManifest(chunk_id, length, _unpack_count(k), _unpack_count(n_raw), stripes, flags, version)


def shard_filename(chunk_id, index):
    return f"{chunk_id:016x}.{index}.fnt"


def manifest_filename(chunk_id):
    return f"{chunk_id:016x}.manifest.fnt"
