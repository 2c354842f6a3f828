"""Quick built-in verification run by ``fntec selftest``."""
from __future__ import annotations

import itertools

import numpy as np

from . import codec
from .interp import build_plan, interpolate, lagrange_oracle
from .poly import eval_horner
from .transform import fnt_forward, fnt_inverse, get_plan, naive_dft

MDS_CASES = ((4, 2), (8, 4), (8, 5), (16, 12))


def check_transform(rng):
    for log_n in range(0, 9):
        n = 1 << log_n
        plan = get_plan(n)
        for _ in range(5):
            a = rng.integers(0, 65537, n)
            if fnt_forward(plan, a).tolist() != naive_dft(plan.root, a):
                return False, f"forward transform differs from the naive DFT at n={n}"
            if fnt_inverse(plan, fnt_forward(plan, a)).tolist() != a.tolist():
                return False, f"round trip failed at n={n}"
    return True, "FNT equals the naive DFT for n = 1..256"


def check_interpolation(rng, trials=50):
    for _ in range(trials):
        n = 1 << int(rng.integers(1, 8))
        k = int(rng.integers(1, n + 1))
        positions = rng.choice(n, size=k, replace=False)
        plan = build_plan(n, positions)
        values = rng.integers(0, 65537, k)
        fast = interpolate(plan, values)
        slow = lagrange_oracle(zip(plan.points.tolist(), values.tolist()))
        if fast.tolist() != np.pad(slow, (0, k - len(slow))).tolist():
            return False, f"interpolation differs from the Lagrange oracle (n={n}, k={k})"
        if eval_horner(fast, plan.points).tolist() != values.tolist():
            return False, f"interpolant misses a point (n={n}, k={k})"
    return True, f"{trials} random interpolations match the Lagrange oracle"


def check_mds(rng):
    patterns = 0
    for n, k in MDS_CASES:
        for systematic in (True, False):
            params = codec.CodeParams(k, n, systematic)
            source = rng.integers(0, 65537, k)
            encoded = codec.encode(params, source, path="fast")
            if not np.array_equal(encoded, codec.encode(params, source, path="direct")):
                return False, f"fast and direct encoders disagree for (n, k) = ({n}, {k})"
            for m in range(k, n + 1):
                for keep in itertools.combinations(range(n), m):
                    received = codec.Codeword(keep, encoded[list(keep)])
                    for path in ("fast", "direct"):
                        if not np.array_equal(codec.decode(params, received, path=path), source):
                            return False, f"{path} decode failed for (n, k) = ({n}, {k}), kept {keep}"
                    patterns += 1
    return True, f"{patterns} erasure patterns decoded by both paths"


def run_all(seed=0):
    rng = np.random.default_rng(seed)
    results = []
    for name, check in (("transform", check_transform), ("interpolation", check_interpolation),
                        ("mds", check_mds)):
        ok, detail = check(rng)
        results.append((name, ok, detail))
    return results
