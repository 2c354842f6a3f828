"""Acceptance criteria, each run at its stated size and tolerance.

Every test prints one PASS/FAIL line; the lines are repeated in the pytest
terminal summary.  Run alone with ``pytest tests/test_acceptance.py -s``.
"""
import itertools
import os
import shutil
import time

import numpy as np
import pytest

from fntec import codec, field, shardio
from fntec.bench import run_variant, time_decode
from fntec.cli import main as cli_main
from fntec.codec import CodeParams, Codeword
from fntec.errors import ShardFormatError
from fntec.interp import build_plan, interpolate, lagrange_oracle
from fntec.transform import count_fnts, fnt_forward, fnt_inverse, get_plan, naive_dft

pytestmark = pytest.mark.slow

P = 65537


def dft_matrix(n, inverse=False):
    """``W[i, j] = r**(i*j mod n)``: a power table indexed by exponent, built
    by repeated multiplication and nothing else from the transform code."""
    r = field.root_of_unity(n, inverse=inverse)
    table = [1] * n
    for i in range(1, n):
        table[i] = table[i - 1] * r % P
    table = np.array(table, dtype=np.int64)
    i = np.arange(n, dtype=np.int64)
    return table[np.outer(i, i) % n]


def test_1_fnt_matches_naive_dft(report):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    mismatches = 0
    sizes = [1 << e for e in range(11)]
    for n in sizes:
        plan = get_plan(n)
        x = rng.integers(0, P, (100, n))
        # exact in int64: n * P**2 < 2**45 for n <= 1024
        expected = (x @ dft_matrix(n).T) % P
        expected_inv = (x @ dft_matrix(n, inverse=True).T) % P * field.inv(n) % P
        mismatches += int(np.any(fnt_forward(plan, x) != expected))
        mismatches += int(np.any(fnt_inverse(plan, x) != expected_inv))
        # the scalar reference agrees with the matrix form on a sample
        if n <= 256:
            for j in range(3):
                mismatches += naive_dft(plan.root, x[j].tolist()) != expected[j].tolist()
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 30
    report(1, "FNT vs naive DFT", ok,
           f"n = 1..1024, 100 vectors each, forward and inverse, {mismatches} mismatches, {elapsed:.2f} s (limit 30 s)")
    assert ok


def test_2_mds_exhaustive(report):
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    failures = checked = 0
    for n, k in [(4, 2), (8, 4), (8, 5), (16, 12)]:
        for systematic in (True, False):
            params = CodeParams(k, n, systematic)
            source = rng.integers(0, P, k)
            for path in ("fast", "direct"):
                encoded = codec.encode(params, source, path)
                for survivors in range(k, n + 1):
                    for kept in itertools.combinations(range(n), survivors):
                        rx = Codeword(list(kept), encoded[list(kept)])
                        failures += codec.decode(params, rx, path).tolist() != source.tolist()
                        checked += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 60
    report(2, "MDS exhaustive", ok,
           f"{checked} decodes over both paths and both code types, {failures} failures, {elapsed:.2f} s (limit 60 s)")
    assert ok


def test_3_oracle_equivalence(report):
    rng = np.random.default_rng(3)
    mismatches = 0
    t0 = time.perf_counter()
    for _ in range(1000):
        k = int(rng.integers(1, 513))
        n = int(rng.integers(k, 1025))
        nd = field.next_power_of_two(n)
        # fast interpolation against the quadratic oracle
        positions = rng.choice(nd, size=k, replace=False)
        plan = build_plan(nd, positions)
        values = rng.integers(0, P, k)
        oracle = lagrange_oracle(zip(plan.points.tolist(), values.tolist()))
        fast = interpolate(plan, values)
        mismatches += fast[len(oracle):].any() or fast[: len(oracle)].tolist() != oracle.tolist()
        # encoder and decoder variants
        source = rng.integers(0, P, k)
        sys_params, non_params = CodeParams(k, n, True), CodeParams(k, n, False)
        encodings = [codec.encode_systematic(sys_params, source),
                     codec.encode_systematic_direct(sys_params, source),
                     codec.encode_systematic_intermediate_direct(sys_params, source)]
        mismatches += any(not np.array_equal(e, encodings[0]) for e in encodings[1:])
        nonsys = codec.encode_nonsystematic(non_params, source)
        kept = rng.choice(n, size=int(rng.integers(k, n + 1)), replace=False)
        for params, encoded, fast_decoder in ((sys_params, encodings[0], codec.decode_systematic),
                                              (non_params, nonsys, codec.decode_nonsystematic)):
            rx = Codeword(kept, encoded[kept])
            a, b = fast_decoder(params, rx), codec.decode_direct(params, rx)
            mismatches += not (np.array_equal(a, b) and np.array_equal(a, source))
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0
    report(3, "oracle equivalence", ok, f"1000 instances (k <= 512, n <= 1024), {mismatches} mismatches, {elapsed:.1f} s")
    assert ok


def test_4_fnt_budget(report):
    n, k = 4096, 2048
    rng = np.random.default_rng(4)
    source = rng.integers(0, P, k)
    measured = {}
    for systematic in (False, True):
        params = CodeParams(k, n, systematic)
        encoded = codec.encode(params, source, "fast")
        # the k highest positions: no systematic symbol, no full reception
        rx = Codeword.from_symbols(encoded, range(k))
        codec.decode(params, rx, "fast")  # position-only precomputation
        with count_fnts() as enc:
            codec.encode(params, source, "fast")
        with count_fnts() as dec:
            decoded = codec.decode(params, rx, "fast")
        assert decoded.tolist() == source.tolist()
        label = "systematic" if systematic else "non-systematic"
        measured[f"{label} encode"] = enc.equivalents(n)
        measured[f"{label} decode"] = dec.equivalents(n)
    limits = {"non-systematic encode": 1, "non-systematic decode": 8,
              "systematic encode": 9, "systematic decode": 9}
    ok = measured["non-systematic encode"] == 1 and all(measured[key] <= lim for key, lim in limits.items())
    detail = ", ".join(f"{key} {measured[key]:g} (limit {lim})" for key, lim in limits.items())
    report(4, "FNT budget", ok, f"n = 4096, k = 2048: {detail} FNT_n")
    assert ok


def test_5_scaling_and_throughput(report):
    sizes = [1 << e for e in range(11, 16)]
    times = {n: time_decode(n // 2, n, stripes=4, reps=7) for n in sizes}
    ratios = {n: times[2 * n] / times[n] for n in sizes[:-1]}
    k = 16384
    result = run_variant("encode_systematic", k, 2 * k, stripes=32, reps=5)
    ok = max(ratios.values()) <= 2.6 and result.mbps >= 10
    rtxt = ", ".join(f"t({2 * n})/t({n}) = {r:.2f}" for n, r in ratios.items())
    report(5, "scaling law and throughput", ok,
           f"{rtxt} (limit 2.6); systematic encode {result.mbps:.1f} MB/s at k = 16384 (limit 10)")
    assert ok


def test_6_nonsystematic_speedup(report):
    k = 16384
    slow = run_variant("encode_systematic", k, 2 * k, stripes=32, reps=5)
    quick = run_variant("encode_nonsystematic", k, 2 * k, stripes=32, reps=5)
    ratio = slow.seconds / quick.seconds
    ok = ratio >= 5
    report(6, "non-systematic vs systematic encode", ok,
           f"{quick.mbps:.1f} vs {slow.mbps:.1f} MB/s, ratio {ratio:.1f} (limit 5)")
    assert ok


def test_7_shard_format(report):
    rng = np.random.default_rng(7)
    bad_round_trips = 0
    for _ in range(10_000):
        n = int(rng.integers(1, 65537))
        size = int(rng.integers(0, 64))
        payload = rng.integers(0, P, size)
        payload[rng.random(size) < 0.2] = 65536  # force escapes
        header = shardio.ShardHeader(int(rng.integers(0, 2**63)), int(rng.integers(1, n + 1)), n,
                                     int(rng.integers(0, n)), int(rng.integers(0, 2)))
        raw = shardio.write_shard(header, payload)
        h, got = shardio.read_shard(raw)
        bad_round_trips += (got.tolist() != payload.tolist() or shardio.write_shard(h, got) != raw
                            or (h.chunk_id, h.k, h.n, h.shard_index, h.flags)
                            != (header.chunk_id, header.k, header.n, header.shard_index, header.flags))
    crashes = accepted_noncanonical = rejected = 0
    base = shardio.write_shard(shardio.ShardHeader(99, 4, 8, 3), [1, 65536, 2, 65536, 3])
    for _ in range(10_000):
        blob = bytearray(base)
        for _ in range(int(rng.integers(1, 5))):
            pos = int(rng.integers(0, 34))  # the header and escape table
            blob[pos] = int(rng.integers(0, 256))
        if rng.random() < 0.3:
            blob = blob[: int(rng.integers(0, len(blob) + 1))]
        elif rng.random() < 0.1:
            blob += bytes(int(rng.integers(1, 5)))
        try:
            h, got = shardio.read_shard(bytes(blob))
        except ShardFormatError:
            rejected += 1
            continue
        except Exception:  # noqa: BLE001 - any other exception is a crash
            crashes += 1
            continue
        accepted_noncanonical += shardio.write_shard(h, got) != bytes(blob)
    ok = bad_round_trips == 0 and crashes == 0 and accepted_noncanonical == 0
    report(7, "shard format", ok,
           f"10000 round trips ({bad_round_trips} bad); 10000 fuzz inputs: {rejected} rejected, "
           f"{crashes} crashes, {accepted_noncanonical} accepted but non-canonical")
    assert ok


def test_8_cli_end_to_end(report, tmp_path):
    rng = np.random.default_rng(8)
    k, n = 1024, 2048
    t0 = time.perf_counter()
    data = rng.bytes(10 * 1000 * 1000)
    src = tmp_path / "input.bin"
    src.write_bytes(data)
    store = tmp_path / "shards"
    assert cli_main(["encode", str(src), "-o", str(store), "--k", str(k), "--n", str(n), "--chunk-id", "0xacce"]) == 0
    manifest_name = shardio.manifest_filename(0xACCE)
    failures = 0
    for trial in range(100):
        work = tmp_path / "trial"
        work.mkdir()
        os.link(store / manifest_name, work / manifest_name)
        deleted = set(rng.choice(n, size=n - k, replace=False).tolist())
        for index in range(n):
            if index not in deleted:
                name = shardio.shard_filename(0xACCE, index)
                os.link(store / name, work / name)
        out = tmp_path / "output.bin"
        code = cli_main(["decode", str(work / manifest_name), "-o", str(out)])
        failures += code != 0 or out.read_bytes() != data
        shutil.rmtree(work)
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 300
    report(8, "CLI end to end", ok,
           f"10 MB at (k, n) = (1024, 2048), 100 deletion patterns of 1024 shards, "
           f"{failures} failures, {elapsed:.1f} s (limit 300 s)")
    assert ok
