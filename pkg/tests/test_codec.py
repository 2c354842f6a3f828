import itertools
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fntec import field
from fntec.codec import (CodeParams, Codeword, decode, decode_direct, decode_nonsystematic,
                         decode_systematic, encode, encode_nonsystematic, encode_systematic,
                         encode_systematic_direct, encode_systematic_intermediate_direct)
from fntec.errors import (DuplicatePosition, NotEnoughSymbols, PositionOutOfRange,
                          SizeMismatch)
from fntec.interp import lagrange_oracle
from fntec.poly import eval_horner
from fntec.transform import count_fnts, fnt_forward, get_plan

P = 65537
SYSTEMATIC_ENCODERS = (encode_systematic, encode_systematic_direct, encode_systematic_intermediate_direct)


def erasure_patterns(n, k):
    for survivors in range(k, n + 1):
        for kept in itertools.combinations(range(n), survivors):
            yield kept


def received(codeword, kept):
    kept = list(kept)
    return Codeword(kept, np.asarray(codeword)[..., kept])


# -- non-systematic ------------------------------------------------------------------

def test_nonsystematic_example():
    params = CodeParams(2, 4, systematic=False)
    r = field.root_of_unity(4)
    assert encode_nonsystematic(params, [5, 7]).tolist() == [12, (5 + 7 * r) % P, 65535, (5 + 7 * r ** 3) % P]
    assert decode_nonsystematic(params, Codeword([0, 2], [12, 65535])).tolist() == [5, 7]


def test_rate_one_is_the_transform(rng):
    params = CodeParams(16, 16, systematic=False)
    s = rng.integers(0, P, 16)
    e = encode_nonsystematic(params, s)
    assert e.tolist() == fnt_forward(get_plan(16), s).tolist()
    with count_fnts() as counter:
        assert decode_nonsystematic(params, Codeword.from_symbols(e)).tolist() == s.tolist()
    assert dict(counter.counts) == {16: 1}


def test_constant_source():
    assert encode_nonsystematic(CodeParams(1, 6, systematic=False), [42]).tolist() == [42] * 6
    for enc in SYSTEMATIC_ENCODERS:
        assert enc(CodeParams(1, 5), [9]).tolist() == [9] * 5


def test_nonsystematic_all_subsets_k4_n8(rng):
    params = CodeParams(4, 8, systematic=False)
    s = rng.integers(0, P, 4)
    e = encode_nonsystematic(params, s)
    subsets = list(itertools.combinations(range(8), 4))
    assert len(subsets) == 70
    for kept in subsets:
        assert decode_nonsystematic(params, received(e, kept)).tolist() == s.tolist()


def test_nonsystematic_matches_horner(rng):
    params = CodeParams(7, 13, systematic=False)
    s = rng.integers(0, P, 7)
    pts = field.powers(params.root, 13)
    assert encode_nonsystematic(params, s).tolist() == eval_horner(s, pts).tolist()


# -- systematic ----------------------------------------------------------------------

@pytest.mark.parametrize("k, n", [(4, 8), (5, 8), (16, 32), (100, 300), (300, 512)])
def test_systematic_prefix(k, n, rng):
    s = rng.integers(0, P, (3, k))
    for enc in SYSTEMATIC_ENCODERS:
        assert np.array_equal(enc(CodeParams(k, n), s)[:, :k], s)


def test_systematic_parity_matches_direct(rng):
    params = CodeParams(4, 8)
    s = rng.integers(0, P, 4)
    assert encode_systematic(params, s).tolist() == encode_systematic_direct(params, s).tolist()


def test_systematic_direct_example(rng):
    params = CodeParams(2, 4)
    s = rng.integers(0, P, 2).tolist()
    pts = field.powers(params.root, 4).tolist()
    poly = lagrange_oracle(zip(pts[:2], s))
    assert encode_systematic_direct(params, s)[2:].tolist() == [eval_horner(poly, x) for x in pts[2:]]


def test_systematic_direct_full_rate(rng):
    s = rng.integers(0, P, 8)
    assert encode_systematic_direct(CodeParams(8, 8), s).tolist() == s.tolist()


def test_intermediate_direct_single_transform(rng):
    params = CodeParams(20, 48)
    with count_fnts() as counter:
        encode_systematic_intermediate_direct(params, rng.integers(0, P, 20))
    assert dict(counter.counts) == {64: 1}


@pytest.mark.parametrize("k", [1, 7, 33, 64])
def test_systematic_encoders_agree(k, rng):
    n = int(rng.integers(k, 4 * k + 2))
    s = rng.integers(0, P, (4, k))
    params = CodeParams(k, n)
    fast = encode_systematic(params, s)
    for enc in SYSTEMATIC_ENCODERS[1:]:
        assert np.array_equal(enc(params, s), fast)


def test_systematic_shortcut_and_example(rng):
    params = CodeParams(4, 8)
    s = rng.integers(0, P, 4)
    e = encode_systematic(params, s)
    with count_fnts() as counter:
        assert decode_systematic(params, received(e, [0, 1, 2, 3, 6])).tolist() == s.tolist()
    assert counter.total() == 0
    assert decode_systematic(params, received(e, range(2, 8))).tolist() == s.tolist()


def test_systematic_all_erasure_patterns(rng):
    params = CodeParams(4, 8)
    s = rng.integers(0, P, 4)
    e = encode_systematic(params, s)
    patterns = list(erasure_patterns(8, 4))
    assert len(patterns) == 163
    for kept in patterns:
        rx = received(e, kept)
        assert decode_systematic(params, rx).tolist() == s.tolist()
        assert decode_direct(params, rx).tolist() == s.tolist()


# -- MDS over both paths -----------------------------------------------------------

@pytest.mark.parametrize("n, k", [(4, 2), (8, 4), (8, 5), (16, 12), (6, 3), (12, 5)])
@pytest.mark.parametrize("systematic", [True, False])
def test_mds_exhaustive(n, k, systematic, rng):
    params = CodeParams(k, n, systematic)
    s = rng.integers(0, P, (2, k))
    encodings = {path: encode(params, s, path) for path in ("fast", "direct")}
    assert np.array_equal(encodings["fast"], encodings["direct"])
    e = encodings["fast"]
    for kept in erasure_patterns(n, k):
        for path in ("fast", "direct"):
            assert np.array_equal(decode(params, received(e, kept), path), s)


def test_decoders_agree_random_16_8(rng):
    params = CodeParams(8, 16, systematic=False)
    for _ in range(30):
        s = rng.integers(0, P, 8)
        kept = np.sort(rng.choice(16, size=int(rng.integers(8, 17)), replace=False))
        rx = received(encode_nonsystematic(params, s), kept)
        assert decode_direct(params, rx).tolist() == decode_nonsystematic(params, rx).tolist() == s.tolist()


@pytest.mark.parametrize("k", [250, 256, 257, 300])
@pytest.mark.parametrize("systematic", [True, False])
def test_paths_agree_across_dispatch_boundary(k, systematic, rng):
    n = 2 * k + 3
    params = CodeParams(k, n, systematic)
    s = rng.integers(0, P, (2, k))
    e = encode(params, s, "fast")
    assert np.array_equal(e, encode(params, s, "direct"))
    assert np.array_equal(e, encode(params, s, "auto"))
    kept = np.sort(rng.choice(n, size=k + 1, replace=False))
    rx = received(e, kept)
    for path in ("fast", "direct", "auto"):
        assert np.array_equal(decode(params, rx, path), s)


def test_decoder_ignores_ordering(rng):
    for systematic in (True, False):
        params = CodeParams(6, 20, systematic)
        s = rng.integers(0, P, 6)
        e = encode(params, s)
        kept = rng.choice(20, size=9, replace=False)
        for path in ("fast", "direct"):
            assert decode(params, received(e, kept), path).tolist() == s.tolist()
            assert decode(params, received(e, np.sort(kept)), path).tolist() == s.tolist()


def test_punctured_non_power_of_two(rng):
    for k, n in [(3, 5), (10, 17), (100, 129), (37, 1000)]:
        for systematic in (True, False):
            params = CodeParams(k, n, systematic)
            assert params.n_domain == field.next_power_of_two(n)
            s = rng.integers(0, P, k)
            e = encode(params, s, "fast")
            assert e.shape == (n,)
            kept = rng.choice(n, size=k, replace=False)
            assert decode(params, received(e, kept), "fast").tolist() == s.tolist()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_round_trip_property(data):
    k = data.draw(st.integers(1, 40))
    n = data.draw(st.integers(k, 3 * k + 5))
    systematic = data.draw(st.booleans())
    path = data.draw(st.sampled_from(["fast", "direct"]))
    s = data.draw(st.lists(st.integers(0, P - 1), min_size=k, max_size=k))
    kept = data.draw(st.lists(st.integers(0, n - 1), min_size=k, max_size=n, unique=True))
    params = CodeParams(k, n, systematic)
    e = encode(params, s, path)
    if systematic:
        assert e[:k].tolist() == s
    assert decode(params, received(e, kept), path).tolist() == s


def test_batched_rows_match_single(rng):
    params = CodeParams(9, 30)
    s = rng.integers(0, P, (5, 9))
    e = encode_systematic(params, s)
    for row in range(5):
        assert np.array_equal(e[row], encode_systematic(params, s[row]))


def test_concurrent_encodes(rng):
    params = CodeParams(500, 1000)
    sources = rng.integers(0, P, (8, 500))
    expected = [encode_systematic(params, s) for s in sources]
    with ThreadPoolExecutor(4) as pool:
        got = list(pool.map(lambda s: encode_systematic(params, s), sources))
    assert all(np.array_equal(a, b) for a, b in zip(got, expected))


# -- instrumentation ---------------------------------------------------------------

def test_fnt_budgets(rng):
    n, k = 4096, 2048
    s = rng.integers(0, P, k)
    erased = range(k)  # no systematic shortcut, no full-reception shortcut
    budgets = {}
    for systematic in (False, True):
        params = CodeParams(k, n, systematic)
        e = encode(params, s, "fast")
        rx = Codeword.from_symbols(e, erased)
        decode(params, rx, "fast")  # warm the plan caches
        with count_fnts() as enc_counter:
            encode(params, s, "fast")
        with count_fnts() as dec_counter:
            assert decode(params, rx, "fast").tolist() == s.tolist()
        budgets[systematic] = enc_counter.equivalents(n), dec_counter.equivalents(n)
    assert budgets[False][0] == 1
    assert budgets[False][1] <= 8
    assert budgets[True][0] <= 9
    assert budgets[True][1] <= 9


def test_counter_scopes_nest(rng):
    params = CodeParams(4, 8, systematic=False)
    with count_fnts() as outer:
        encode_nonsystematic(params, [1, 2, 3, 4])
        with count_fnts() as inner:
            encode_nonsystematic(params, [1, 2, 3, 4])
    assert inner.total() == 1 and outer.total() == 2


# -- errors ------------------------------------------------------------------------

@pytest.mark.parametrize("k, n", [(0, 4), (5, 4), (1, 65537)])
def test_bad_params(k, n):
    with pytest.raises(ValueError):
        CodeParams(k, n)


def test_largest_code_constructible():
    assert CodeParams(1, 65536).n_domain == 65536


def test_encode_errors():
    for enc in SYSTEMATIC_ENCODERS + (encode_nonsystematic,):
        with pytest.raises(SizeMismatch):
            enc(CodeParams(3, 8), [1, 2])


def test_decode_errors():
    params = CodeParams(3, 8)
    for dec in (decode_systematic, decode_nonsystematic, decode_direct):
        with pytest.raises(NotEnoughSymbols):
            dec(params, Codeword([0, 5], [1, 2]))
        with pytest.raises(DuplicatePosition):
            dec(params, Codeword([0, 5, 5], [1, 2, 2]))
        with pytest.raises(PositionOutOfRange):
            dec(params, Codeword([0, 5, 8], [1, 2, 3]))
    with pytest.raises(SizeMismatch):
        Codeword([0, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        decode(params, Codeword([0, 1, 2], [1, 2, 3]), path="bogus")
