from __future__ import annotations

from digerm.fuzz import instance_rng, random_ops, run_fuzz, run_instance, thread_cap
from digerm.precubical import random_precubical, validate
from digerm.subdivision import apply_ops


def test_instances_are_reproducible():
    a = run_instance(3, 5).to_json()
    b = run_instance(3, 5).to_json()
    assert a == b
    assert run_instance(3, 6).to_json() != a


def test_parallel_matches_serial():
    serial = [r.to_json() for r in run_fuzz(11, 16, threads=1)]
    parallel = [r.to_json() for r in run_fuzz(11, 16, threads=2)]
    assert serial == parallel
    assert all(r["pass"] for r in serial)


def test_random_ops_replay():
    rng = instance_rng(0, 1)
    K = random_precubical(rng)
    assert validate(K).ok
    ops, Y = random_ops(rng, K)
    assert 1 <= len(ops) <= 5
    assert [o.kind for o in ops[1:]].count("grid") == 0
    assert apply_ops(K, ops) == Y


def test_thread_cap_reads_env(monkeypatch):
    monkeypatch.setenv("DIGERM_THREADS", "1")
    assert thread_cap() == 1
    monkeypatch.setenv("DIGERM_THREADS", "junk")
    assert thread_cap() >= 1
