import json

import numpy as np
import pytest

from srq.cli import main, parse_query, selftest, flip_payload_bit
from srq.io import array_bytes, parse_binary, read_array, random_array, write_array
from srq.oracle import QuerySpec, oracle_answer


def run(capsys, *argv):
    code = main([str(x) for x in argv])
    return code, capsys.readouterr()


def test_array_formats(tmp_path):
    a = [5, -3, 2**62, 0]
    for fmt in ("text", "binary"):
        p = tmp_path / f"a.{fmt}"
        write_array(p, a, fmt)
        assert list(read_array(p)) == a
    assert array_bytes(a)[:4] == b"SRQA"
    with pytest.raises(ValueError):
        parse_binary(b"SRQA" + (3).to_bytes(8, "little") + b"\0" * 8)
    (tmp_path / "bad.txt").write_text("1 2 x")
    with pytest.raises(ValueError):
        read_array(tmp_path / "bad.txt")


def test_random_array_dup_rate():
    a = random_array(10_000, 0.3, seed=1)
    rate = np.mean(a[1:] == a[:-1])
    assert 0.27 < rate < 0.33
    assert np.array_equal(a, random_array(10_000, 0.3, seed=1))


def test_build_reports_and_is_deterministic(tmp_path, capsys):
    arr = tmp_path / "a.txt"
    write_array(arr, np.random.default_rng(0).permutation(100_000))
    code, out = run(capsys, "build", arr, "--variant", "b", "--out", tmp_path / "a.srq")
    assert code == 0
    rep = json.loads(out.out)
    assert rep["payload"]["T"] + rep["payload"]["U"] <= 3 * 100_000
    first = (tmp_path / "a.srq").read_bytes()
    run(capsys, "build", arr, "--variant", "b", "--out", tmp_path / "a.srq")
    assert (tmp_path / "a.srq").read_bytes() == first


def test_build_all_equal(tmp_path, capsys):
    arr = tmp_path / "eq.txt"
    write_array(arr, [7] * 1000)
    code, out = run(capsys, "build", arr, "--variant", "d", "--out", tmp_path / "eq.srq")
    rep = json.loads(out.out)
    assert code == 0 and rep["k"] == 999 and rep["payload"]["T"] == 1


def test_build_errors(tmp_path, capsys):
    one = tmp_path / "one.txt"
    one.write_text("4\n")
    code, out = run(capsys, "build", one)
    assert code != 0 and "at least 2" in out.err
    code, out = run(capsys, "build", tmp_path / "missing.txt")
    assert code != 0


def test_query_script_matches_oracle(tmp_path, capsys):
    rng = np.random.default_rng(3)
    a = random_array(300, 0.4, seed=5) % 7
    write_array(tmp_path / "a.txt", a)
    run(capsys, "build", tmp_path / "a.txt", "--variant", "d", "--out", tmp_path / "a.srq")
    lines, truth = [], []
    kinds = ["RMINQ", "RLMINQ", "RRMINQ", "RKMINQ", "RMAXQ", "RLMAXQ", "RRMAXQ", "RKMAXQ",
             "PSV", "NSV", "PLV", "NLV"]
    for _ in range(10_000):
        kind = kinds[rng.integers(len(kinds))]
        i, j = sorted(int(x) for x in rng.integers(1, 301, 2))
        if kind in ("PSV", "NSV", "PLV", "NLV"):
            q = QuerySpec(kind, i)
        elif kind.startswith("RK"):
            q = QuerySpec(kind, i, j, int(rng.integers(1, 5)))
        else:
            q = QuerySpec(kind, i, j)
        lines.append(str(q))
        ans = oracle_answer(a, q)
        truth.append("NONE" if ans is None else str(ans))
    (tmp_path / "q.txt").write_text("\n".join(lines) + "\n")
    code, out = run(capsys, "query", tmp_path / "a.srq", tmp_path / "q.txt")
    assert code == 0
    assert out.out.split("\n")[:-1] == truth


def test_query_errors_reported_per_line(tmp_path, capsys):
    write_array(tmp_path / "a.txt", [3, 1, 2])
    run(capsys, "build", tmp_path / "a.txt", "--variant", "a", "--out", tmp_path / "a.srq")
    (tmp_path / "q.txt").write_text("PSV 1\nNSV 2\nRMINQ 1\nPLV 3\n")
    code, out = run(capsys, "query", tmp_path / "a.srq", tmp_path / "q.txt")
    assert code == 1
    rows = out.out.split("\n")
    assert rows[0] == "0"
    assert rows[1].startswith("ERROR line 2") and rows[2].startswith("ERROR line 3")
    assert rows[3] == "1"


def test_parse_query():
    assert parse_query("rkminq 3 9 2") == QuerySpec("RKMINQ", 3, 9, 2)
    assert parse_query("PSV 5") == QuerySpec("PSV", 5)
    for bad in ("", "PSV", "PSV 1 2", "RMINQ a b", "NOPE 1"):
        with pytest.raises(ValueError):
            parse_query(bad)


def test_bench_rows(capsys):
    code, out = run(capsys, "bench", "--sizes", "1024", "--variants", "b", "--queries", "2000")
    rows = [json.loads(x) for x in out.out.splitlines()]
    assert code == 0 and {r["kind"] for r in rows} == {"RMINQ", "RRMINQ", "RMAXQ", "RRMAXQ",
                                                       "PSV", "PLV"}
    assert rows[0]["bits_per_element"] <= 3.0
    code, out = run(capsys, "bench", "--sizes", "1000")
    assert code != 0


def test_selftest_quick_passes_and_detects_corruption(capsys):
    code, out = run(capsys, "selftest")
    assert code == 0 and json.loads(out.out)["passed"]
    checked, bad = selftest(4, flip_payload_bit(3))
    assert bad is not None and "array" in bad
