import math
import threading

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from srq.combined import (CHUNK, CombinedEncoding, build_tables, expand_with_map, f, f_window,
                          fp_window, fprime, lemma6_holds, payload_bound, tables)
from srq.heap_build import color_bits, dfuds_bits
from srq.oracle import QuerySpec, oracle_answer

from conftest import dup_array, small_arrays

groups = st.lists(st.integers(0, 4), max_size=30).map(
    lambda gs: "".join("(" * g + ")" for g in gs))
cbits = st.text("01", max_size=40)


def test_f_examples():
    assert f("()()", "010") == "())()"
    assert fprime("()()", "010") == "())()"
    for s in ("", "()", "(()"):
        assert f(s, "") == s and fprime(s, "") == s
    assert f("", "0110") == "" and fprime("", "101") == ""


@settings(max_examples=200, deadline=None)
@given(groups, cbits)
def test_f_recurrence(s, c):
    """Each 1 emits ')', each 0 emits one group, leftovers of s are appended."""
    out = f(s, c)
    if not s:
        assert out == ""
    elif not c:
        assert out == s
    elif c[0] == "1":
        assert out == ")" + f(s, c[1:])
    else:
        g = s.index(")") + 1
        assert out == s[:g] + f(s[g:], c[1:])


@settings(max_examples=200, deadline=None)
@given(groups, cbits)
def test_fprime_recurrence(s, c):
    """Mirror of f: c and the groups of s are consumed from the right."""
    out = fprime(s, c)
    if not s:
        assert out == ""
    elif not c:
        assert out == s
    elif c[-1] == "1":
        assert out == fprime(s, c[:-1]) + ")"
    else:
        start = len(s) - 1
        while start > 0 and s[start - 1] == "(":
            start -= 1
        assert out == fprime(s[:start], c[:-1]) + s[start:]


def test_table_sizes_and_identity_rows():
    tf, tfp = build_tables(CHUNK)
    assert tf.shape[0] == 2 << (2 * CHUNK)  # 2^16 (s, c) pairs per state
    small, _ = build_tables(4)
    for s8 in range(16):
        e = int(small[s8])  # state 0, c chunk all zeros: groups are copied verbatim
        si, out_len = (e >> 21) & 15, (e >> 16) & 31
        assert out_len == si
        assert (e & 0xFFFF) == s8 & ((1 << si) - 1)
    with pytest.raises(ValueError):
        build_tables(9)


def _bits(s):
    return [1 if ch == "(" else 0 for ch in s]


def test_chained_tables_match_direct():
    rng = np.random.default_rng(4)
    tf, tfp = tables()
    for _ in range(10_000):
        gs = rng.integers(0, 4, size=40)
        s = "".join("(" * g + ")" for g in gs)[:64]
        c = "".join(rng.choice(["0", "1"], size=64, p=[0.7, 0.3]))
        sv = sum(b << t for t, b in enumerate(_bits(s)))
        cv = sum(int(b) << t for t, b in enumerate(c))
        want = int(rng.integers(1, 33))
        got = int(f_window(tf, np.uint64(sv), np.uint64(cv), want))
        direct = _bits(f(s, c))[:want]
        assert [(got >> t) & 1 for t in range(len(direct))] == direct
        # f' reads windows ending at bit 63
        s_r, c_r = s.rjust(64, ")"), c.rjust(64, "0")
        sv = sum(b << t for t, b in enumerate(_bits(s_r)))
        cv = sum(int(b) << t for t, b in enumerate(c_r))
        got = int(fp_window(tfp, np.uint64(sv), np.uint64(cv), want))
        direct = _bits(fprime(s_r, c_r))[-want:]
        assert [(got >> t) & 1 for t in range(want)] == direct


def test_lemma6_exhaustive():
    assert lemma6_holds(1, 0, 1)
    bad = [(n, k, a) for n in range(1, 65) for k in range(n + 1) for a in (1, 2)
           if not lemma6_holds(n, k, a)]
    assert bad == []


def test_bounds_below_theorem_rates():
    for n in (100, 1000):
        for k in range(0, n, 37):
            assert payload_bound("b", n, k) <= n * (1 + math.log2(5)) + 2 * math.log2(n)
            assert payload_bound("d", n, k) <= n * (3 + math.log2(3)) + 2 * math.log2(n)
            assert payload_bound("a", n, k) <= n * math.log2(9) + 1
            assert payload_bound("c", n, k) <= n * math.log2(17) + 1


def blocks_equal(enc, a):
    w = enc.w
    for side, fn in (("min", enc.decode_min_block), ("max", enc.decode_max_block)):
        d = dfuds_bits(a, side)
        for i in range(1, enc.nblocks + 1):
            seg = d[(i - 1) * w: i * w]
            got = fn(i)
            if [(got >> t) & 1 for t in range(len(seg))] != list(seg):
                return False
    return True


@pytest.mark.parametrize("rate", [0.0, 0.3, 0.8])
def test_block_decode_random(rate):
    rng = np.random.default_rng(int(rate * 10))
    for _ in range(20):
        a = dup_array(rng, int(rng.integers(2, 600)), rate)
        assert blocks_equal(CombinedEncoding.encode(a, "b"), a)


def test_duplicate_free_blocks_use_case_one():
    a = np.random.default_rng(8).permutation(1000)
    enc = CombinedEncoding.encode(a, "d")
    for aux in enc.aux:
        assert aux.q.count("1") == 0 and aux.r.count("1") == 0
        assert aux.p.count("1") == enc.nblocks


def test_pqr_caps_and_offsets():
    rng = np.random.default_rng(10)
    a = dup_array(rng, 1024, 0.3)
    enc = CombinedEncoding.encode(a, "b")
    cap = math.ceil(2 * (enc.n + 1) / enc.w)
    for aux in enc.aux:
        for s in (aux.p, aux.q, aux.r):
            assert s.count("1") <= cap
        assert np.all(aux.ki[: aux.nki] < enc.w) and np.all(aux.ki[: aux.nki] >= 1)


def test_block_index_errors():
    enc = CombinedEncoding.encode([3, 1, 2], "b")
    with pytest.raises(IndexError):
        enc.decode_min_block(0)
    with pytest.raises(IndexError):
        enc.decode_max_block(enc.nblocks + 1)
    with pytest.raises(ValueError):
        CombinedEncoding.encode([3, 1, 2], "a").decode_min_block(1)
    with pytest.raises(ValueError):
        enc.reconstruct_full()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=80))
def test_correspondence_preserves_open_order(a):
    enc = CombinedEncoding.encode(a, "b")
    for aux in enc.aux:
        d, corr = expand_with_map(aux._dprime, enc.c_store.to_array(), enc.n)
        opens = corr[d == 1]
        assert np.all(np.diff(opens) > 0)
        assert np.array_equal(aux._dprime[opens - 1], np.ones(opens.shape[0], np.uint8))
        # symbols without a correspondent are exactly the k inserted closes
        assert int(np.sum(corr == 0)) == enc.k


def test_reconstruct_examples():
    a = [3, 1, 1, 2]
    dmin, dmax, vmin, vmax = CombinedEncoding.encode(a, "c").reconstruct_full()
    assert list(dmin) == list(dfuds_bits(a, "min"))
    assert list(dmax) == list(dfuds_bits(a, "max"))
    assert list(vmin) == list(color_bits(a, "min"))
    assert list(vmax) == list(color_bits(a, "max"))
    dmin, _, vmin, _ = CombinedEncoding.encode([4, 1, 3], "a").reconstruct_full()
    assert list(dmin) == list(dfuds_bits([4, 1, 3], "min")) and vmin is None


def test_variant_query_sets():
    enc = CombinedEncoding.encode([2, 1, 1, 3], "a")
    with pytest.raises(ValueError):
        enc.query(QuerySpec("RKMINQ", 1, 4, 1))
    with pytest.raises(ValueError):
        enc.query(QuerySpec("NSV", 1))
    assert enc.query(QuerySpec("PSV", 4)) == 3
    with pytest.raises(ValueError):
        enc.query(QuerySpec("RMINQ", 2, 5))


def test_all_variants_agree_with_oracle():
    for a in small_arrays(4):
        encs = [CombinedEncoding.encode(a, v) for v in "abcd"]
        n = len(a)
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                for kind in ("RMINQ", "RRMAXQ", "RLMINQ", "RLMAXQ"):
                    q = QuerySpec(kind, i, j)
                    truth = oracle_answer(a, q)
                    for e in encs:
                        if kind in e.supported:
                            assert e.query(q) == truth
            for kind in ("PSV", "PLV", "NSV", "NLV"):
                q = QuerySpec(kind, i)
                for e in encs:
                    if kind in e.supported:
                        assert e.query(q) == oracle_answer(a, q)


def test_psv_with_duplicates_variant_b():
    a = [3, 3, 1, 1, 2, 2, 2, 1]
    enc = CombinedEncoding.encode(a, "b")
    for i in range(1, 9):
        for kind in ("PSV", "PLV"):
            assert enc.query(QuerySpec(kind, i)) == oracle_answer(a, QuerySpec(kind, i))


@pytest.mark.parametrize("variant", list("abcd"))
def test_serialization_round_trip(variant):
    a = dup_array(np.random.default_rng(11), 700, 0.4)
    enc = CombinedEncoding.encode(a, variant)
    data = enc.to_bytes()
    assert data[:5] == b"SRQ1" + variant.encode()
    again = CombinedEncoding.from_bytes(data)
    assert again.to_bytes() == data
    q = QuerySpec("RRMINQ", 5, 600)
    assert again.query(q) == enc.query(q) == oracle_answer(a, q)
    with pytest.raises(ValueError):
        CombinedEncoding.from_bytes(b"XXXX" + data[4:])
    with pytest.raises(ValueError):
        CombinedEncoding.from_bytes(data + b"\0")


def test_space_report_fields():
    a = np.random.default_rng(12).permutation(2000)
    rep = CombinedEncoding.encode(a, "b").space_report()
    assert rep["payload"]["T"] + rep["payload"]["U"] <= 3 * 2000
    assert rep["bits_per_element"] == rep["payload_bits"] / 2000
    assert rep["within_bound"]
    assert set(rep["aux"]) == {"C_index", "decode_min", "decode_max"}
    rep_d = CombinedEncoding.encode(a, "d").space_report()
    assert rep_d["payload"]["V"] == 2000 + 1


def test_lazy_cache_is_shared_across_threads():
    a = dup_array(np.random.default_rng(13), 3000, 0.3)
    enc = CombinedEncoding.encode(a, "c")
    fulls, heaps = [], []

    def worker():
        fulls.append(enc.reconstruct_full())
        heaps.append(enc.heaps())

    threads = [threading.Thread(target=worker) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    first = enc.reconstruct_full()
    for r in fulls:
        assert all(np.array_equal(x, y) for x, y in zip(r, first))
    assert all(h is enc.heaps() for h in heaps)
