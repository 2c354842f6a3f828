"""Command-line interface: ``fntec encode|decode|bench|selftest``."""
from __future__ import annotations

import argparse
import hashlib
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import codec, shardio
from .bench import CSV_HEADER, run_grid
from .errors import FNTCodeError
from .transform import count_fnts

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser():
    parser = _Parser(prog="fntec", description="Reed-Solomon erasure coding over GF(65537).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def code_args(p, need_kn=True):
        p.add_argument("--k", type=int, required=need_kn, help="source symbols per stripe")
        p.add_argument("--n", type=int, required=need_kn, help="encoded symbols (shards) per stripe")
        g = p.add_mutually_exclusive_group()
        g.add_argument("--systematic", dest="systematic", action="store_true", default=True)
        g.add_argument("--non-systematic", dest="systematic", action="store_false")
        p.add_argument("--path", choices=codec.PATHS, default="auto",
                       help="fast (transform) or direct (quadratic) algorithms; auto picks by k")
        p.add_argument("--jobs", type=int, default=1, help="threads working on stripe blocks")

    p = sub.add_parser("encode", help="split a file into n shards")
    p.add_argument("input", type=Path)
    p.add_argument("-o", "--output-dir", type=Path, required=True)
    p.add_argument("--chunk-id", type=lambda s: int(s, 0), default=None,
                   help="chunk identifier (default: derived from the file contents)")
    code_args(p)

    p = sub.add_parser("decode", help="rebuild a file from its manifest and any k shards")
    p.add_argument("manifest", type=Path)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--shard-dir", type=Path, default=None,
                   help="directory holding the shards (default: the manifest's directory)")
    p.add_argument("--path", choices=codec.PATHS, default="auto")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("bench", help="CSV throughput table for every variant")
    p.add_argument("--grid", type=_int_list, default=[1 << i for i in range(8, 15)],
                   help="comma-separated k values; n = 2k")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--bytes", dest="target_bytes", type=int, default=1 << 20,
                   help="approximate source bytes per measurement")
    p.add_argument("--direct-max-k", type=int, default=2048,
                   help="skip the quadratic variants above this k")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("selftest", help="oracle-equivalence and exhaustive MDS checks")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _params(args):
    if args.k is None or args.n is None or not (1 <= args.k <= args.n <= 65536):
        raise UsageError(f"need 1 <= k <= n <= 65536, got k={args.k}, n={args.n}")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    return codec.CodeParams(args.k, args.n, args.systematic)


def _blocks(total, jobs):
    size = max(1, -(-total // (4 * jobs))) if jobs > 1 else max(total, 1)
    return [(s, min(s + size, total)) for s in range(0, total, size)]


def _map_stripes(fn, rows, width, jobs):
    """Apply ``fn`` to stripe blocks of ``rows``, optionally on several threads."""
    out = np.empty((rows.shape[0], width), dtype=np.int64)
    blocks = _blocks(rows.shape[0], jobs)

    def work(span):
        s, e = span
        out[s:e] = fn(rows[s:e])

    if jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(work, blocks))
    else:
        for span in blocks:
            work(span)
    return out


def _report(action, symbols, nbytes, seconds, counter, n_domain, stripes):
    rate = symbols / seconds if seconds > 0 else float("inf")
    mbps = nbytes / seconds / 1e6 if seconds > 0 else float("inf")
    sizes = ", ".join(f"{size}:{c}" for size, c in sorted(counter.counts.items())) or "none"
    per_stripe = counter.equivalents(n_domain) / max(stripes, 1)
    print(f"{action}: {symbols} symbols in {seconds:.3f} s ({rate:,.0f} symbols/s, {mbps:.2f} MB/s); "
          f"FNTs by size {sizes} over {stripes} stripes = {per_stripe:.1f} x FNT_{n_domain} per stripe")


def cmd_encode(args):
    params = _params(args)
    try:
        data = args.input.read_bytes()
    except OSError as exc:
        raise DataError(f"cannot read {args.input}: {exc}") from exc
    chunk_id = args.chunk_id
    if chunk_id is None:
        chunk_id = int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "big")
    if not 0 <= chunk_id < 1 << 64:
        raise UsageError("chunk id must fit in 64 bits")
    source = shardio.symbolize(data, params.k)
    with count_fnts() as counter:
        t0 = time.perf_counter()
        encoded = _map_stripes(lambda rows: codec.encode(params, rows, path=args.path),
                               source, params.n, args.jobs)
        seconds = time.perf_counter() - t0
    flags = shardio.FLAG_SYSTEMATIC if params.systematic else 0
    try:
        args.output_dir.mkdir(parents=True, exist_ok=True)
        columns = np.ascontiguousarray(encoded.T)
        for index in range(params.n):
            header = shardio.ShardHeader(chunk_id, params.k, params.n, index, flags)
            blob = shardio.write_shard(header, columns[index])
            (args.output_dir / shardio.shard_filename(chunk_id, index)).write_bytes(blob)
        manifest = shardio.ChunkManifest(chunk_id, len(data), params.k, params.n, source.shape[0], flags)
        (args.output_dir / shardio.manifest_filename(chunk_id)).write_bytes(shardio.write_manifest(manifest))
    except OSError as exc:
        raise DataError(f"cannot write shards: {exc}") from exc
    _report("encode", source.size, len(data), seconds, counter, params.n_domain, source.shape[0])
    print(f"wrote {params.n} shards and {shardio.manifest_filename(chunk_id)} to {args.output_dir}")
    return EXIT_OK


def _collect_shards(manifest, shard_dir):
    """Read the lowest-indexed valid shards until ``k`` are found."""
    found = {}
    prefix = f"{manifest.chunk_id:016x}."
    indices = []
    for entry in os.listdir(shard_dir):
        parts = entry.split(".")
        if entry.startswith(prefix) and len(parts) == 3 and parts[2] == "fnt" and parts[1].isdigit():
            indices.append(int(parts[1]))
    for index in sorted(indices):
        if len(found) == manifest.k:
            break
        path = shard_dir / shardio.shard_filename(manifest.chunk_id, index)
        try:
            header, payload = shardio.read_shard(path.read_bytes())
        except (OSError, FNTCodeError) as exc:
            print(f"skipping {path.name}: {exc}", file=sys.stderr)
            continue
        if (header.chunk_id, header.k, header.n, header.flags, header.shard_index) != (
                manifest.chunk_id, manifest.k, manifest.n, manifest.flags, index) \
                or header.payload_symbols != manifest.stripes:
            print(f"skipping {path.name}: header does not match the manifest", file=sys.stderr)
            continue
        found[index] = payload
    return found


def cmd_decode(args):
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    try:
        manifest = shardio.read_manifest(args.manifest.read_bytes())
    except OSError as exc:
        raise DataError(f"cannot read manifest {args.manifest}: {exc}") from exc
    shard_dir = args.shard_dir or args.manifest.parent
    params = codec.CodeParams(manifest.k, manifest.n, manifest.systematic)
    found = _collect_shards(manifest, shard_dir)
    if len(found) < params.k:
        raise DataError(f"not enough shards: found {len(found)}, required {params.k}")
    positions = sorted(found)
    values = np.stack([found[p] for p in positions], axis=1) if positions else np.empty((0, 0))
    values = values.reshape(manifest.stripes, len(positions))
    with count_fnts() as counter:
        t0 = time.perf_counter()
        source = _map_stripes(
            lambda rows: codec.decode(params, codec.Codeword(positions, rows), path=args.path),
            values, params.k, args.jobs)
        seconds = time.perf_counter() - t0
    if source.size and source.max() > 0xFFFF:
        raise DataError("decoded symbols are not 16-bit values; the shards are inconsistent")
    data = shardio.desymbolize(source, manifest.original_length)
    try:
        args.output.write_bytes(data)
    except OSError as exc:
        raise DataError(f"cannot write {args.output}: {exc}") from exc
    _report("decode", source.size, len(data), seconds, counter, params.n_domain, source.shape[0])
    return EXIT_OK


def cmd_bench(args):
    if args.reps < 1 or any(k < 1 or 2 * k > 65536 for k in args.grid):
        raise UsageError("--reps must be positive and every grid k must satisfy 1 <= k <= 32768")
    print(CSV_HEADER, flush=True)
    for result in run_grid(args.grid, reps=args.reps, target_bytes=args.target_bytes,
                           direct_max_k=args.direct_max_k, seed=args.seed):
        print(result.csv(), flush=True)
    return EXIT_OK


def cmd_selftest(args):
    from .selftest import run_all

    results = run_all(seed=args.seed)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_DATA


COMMANDS = {"encode": cmd_encode, "decode": cmd_decode, "bench": cmd_bench, "selftest": cmd_selftest}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"fntec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, FNTCodeError) as exc:
        print(f"fntec: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
