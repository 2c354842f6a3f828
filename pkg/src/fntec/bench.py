"""Throughput and transform-count measurements for every codec variant."""
from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

import numpy as np

from . import codec
from .interp import clear_plan_cache
from .transform import count_fnts

CSV_HEADER = "variant,k,n,bytes,seconds,MBps,fnt_equivalents"

VARIANTS = (
    "encode_nonsystematic",
    "decode_nonsystematic",
    "encode_systematic",
    "decode_systematic",
    "encode_systematic_direct",
    "encode_systematic_intermediate_direct",
    "decode_direct",
)
DIRECT_VARIANTS = frozenset(v for v in VARIANTS if "direct" in v)


@dataclass(frozen=True)
class BenchResult:
    variant: str
    k: int
    n: int
    bytes: int
    seconds: float
    fnt_equivalents: float

    @property
    def mbps(self):
        return self.bytes / self.seconds / 1e6 if self.seconds > 0 else float("inf")

    def csv(self):
        return (f"{self.variant},{self.k},{self.n},{self.bytes},{self.seconds:.6f},"
                f"{self.mbps:.3f},{self.fnt_equivalents:.3f}")


def erasure_pattern(k, n):
    """Received positions for the benchmark decoders: the ``k`` highest.

    With ``k <= n/2`` no systematic position survives, so no shortcut applies.
    """
    return np.arange(n - k, n)


def _time(fn, reps):
    times = []
    counts = None
    for _ in range(reps):
        with count_fnts() as counter:
            t0 = time.perf_counter()
            fn()
            times.append(time.perf_counter() - t0)
        counts = counter
    return statistics.median(times), counts


def run_variant(variant, k, n, stripes=1, reps=3, seed=0):
    """Time one variant on ``stripes`` random codewords.

    Position-only precomputation is done before timing starts.
    """
    rng = np.random.default_rng(seed)
    source = rng.integers(0, 1 << 16, size=(stripes, k))
    systematic = "nonsystematic" not in variant
    params = codec.CodeParams(k, n, systematic)
    keep = erasure_pattern(k, n)

    fn = getattr(codec, variant)
    if variant.startswith("encode"):
        arg, warm_arg = source, source[:1]
    else:
        encoded = (codec.encode_systematic if systematic else codec.encode_nonsystematic)(params, source)
        arg = codec.Codeword(keep, encoded[:, keep])
        warm_arg = codec.Codeword(keep, encoded[:1, keep])
    # one small call fills the transform, decode-plan and weight caches
    fn(params, warm_arg)

    def call():
        fn(params, arg)

    seconds, counter = _time(call, reps)
    return BenchResult(variant, k, n, 2 * k * stripes, seconds,
                       counter.equivalents(params.n_domain) / stripes)


def run_grid(grid, reps=3, target_bytes=1 << 20, direct_max_k=2048, variants=VARIANTS, seed=0):
    """Yield results for every ``k`` in ``grid`` at rate 1/2 (``n = 2k``)."""
    for k in grid:
        n = 2 * k
        stripes = max(1, target_bytes // (2 * k))
        for variant in variants:
            if variant in DIRECT_VARIANTS and k > direct_max_k:
                continue
            yield run_variant(variant, k, n, stripes=stripes, reps=reps, seed=seed)


def time_decode(k, n, stripes=1, reps=5, seed=0, systematic=True):
    """Median wall time of a fast decode including its decode plan."""
    rng = np.random.default_rng(seed)
    params = codec.CodeParams(k, n, systematic)
    source = rng.integers(0, 1 << 16, size=(stripes, k))
    encode = codec.encode_systematic if systematic else codec.encode_nonsystematic
    decode = codec.decode_systematic if systematic else codec.decode_nonsystematic
    keep = erasure_pattern(k, n)
    received = codec.Codeword(keep, encode(params, source)[:, keep])
    decode(params, codec.Codeword(keep, received.values[:1]))
    times = []
    for _ in range(reps):
        clear_plan_cache()
        t0 = time.perf_counter()
        decode(params, received)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)
