"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) for the summary alone,
or through pytest, where the lines are repeated in the terminal summary.
Each criterion times its own work, corpus generation included.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from digerm.branching import branching_space, merging_space, pi0, pi0_full
from digerm.flowcat import oracle_check
from digerm.fuzz import instance_rng, random_ops
from digerm.globular import globe, op, realize
from digerm.homology import HomologyGroup, branching_homology, merging_homology
from digerm.precubical import CATALOG, PrecubicalSet, gen_cube, gen_example, random_precubical
from digerm.snf import check_snf, snf
from digerm.subdivision import SubdivisionOp, apply_ops, check_invariance
from oracles import random_matrix

SEED = 20260417
RESULTS: list[str] = []


def record(number: int, title: str, ok: bool, elapsed: float, limit: float, detail: str) -> bool:
    passed = ok and elapsed < limit
    RESULTS.append(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}: {detail} "
                   f"({elapsed:.2f}s, limit {limit:g}s)")
    print(RESULTS[-1])
    return passed


def zero_beyond(H: dict, start: int) -> bool:
    return all(g.is_zero for n, g in H.items() if n >= start)


def d_squared(X, side: str) -> list[str]:
    bad = []
    for c in X.cells:
        acc: dict[str, int] = {}
        for a, x in getattr(c, side):
            for b, y in getattr(X[x], side):
                acc[y] = acc.get(y, 0) + a * b
        bad += [f"{c.id}->{y}" for y, v in acc.items() if v]
    return bad


def catalog():
    return [realize(gen_example(name)) for name in sorted(CATALOG)] + [globe(n) for n in range(5)] \
        + [realize(gen_cube(n)) for n in range(5)]


def fuzz_corpus(count: int, stream: int):
    for i in range(count):
        yield realize(random_precubical(instance_rng(SEED + stream, i)))


def test_1_globe_suite():
    t0 = time.perf_counter()
    failures = []
    for n in range(5):
        X = globe(n)
        Hb, Hm = branching_homology(X), merging_homology(X)
        if Hb[0] != HomologyGroup(1) or not zero_beyond(Hb, 1):
            failures.append(f"globe({n}) branching {Hb}")
        if Hm[0] != HomologyGroup(1) or not zero_beyond(Hm, 1):
            failures.append(f"globe({n}) merging {Hm}")
    ok = record(1, "globe suite", not failures, time.perf_counter() - t0, 1.0,
                "; ".join(failures) or "H0 = Z and higher groups 0 for n = 0..4, both sides")
    assert ok, failures


def test_2_branching_detects_choice():
    t0 = time.perf_counter()
    failures = []
    hollow = realize(gen_example("hollow_square"))
    filled = realize(gen_example("filled_square"))
    # by hand: two disjoint outgoing edges vs two edges joined by the square
    by_hand = {("hollow", "branch"): 2, ("hollow", "merge"): 2,
               ("filled", "branch"): 1, ("filled", "merge"): 1}
    for name, X in (("hollow", hollow), ("filled", filled)):
        for side, space, state in (("branch", branching_space, "00"), ("merge", merging_space, "11")):
            C = space(X, state)
            counts = {pi0(C).count, pi0_full(C), by_hand[name, side]}
            if len(counts) != 1:
                failures.append(f"{name} {side} pi0 counts disagree: {counts}")
    expect = {"hollow": HomologyGroup(1), "filled": HomologyGroup()}
    for name, X in (("hollow", hollow), ("filled", filled)):
        for side, fn in (("H1-", branching_homology), ("H1+", merging_homology)):
            if fn(X)[1] != expect[name]:
                failures.append(f"{name} {side} = {fn(X)[1]}")
    ok = record(2, "branching detects choice", not failures, time.perf_counter() - t0, 1.0,
                "; ".join(failures) or "hollow H1 = Z, filled H1 = 0 on both sides; pi0 oracles agree")
    assert ok, failures


def test_3_subdivision_invariance():
    t0 = time.perf_counter()
    failures = []
    kinds: dict[str, int] = {}
    instances = 0
    fuzzed = 0  # fuzz instances with a nonempty op sequence
    for i in range(250):
        rng = instance_rng(SEED + 3, i)
        K = random_precubical(rng, max_dim=3, max_cubes=200)
        ops, _ = random_ops(rng, K, max_len=5)
        for o in ops:
            kinds[o.kind] = kinds.get(o.kind, 0) + 1
        fuzzed += bool(ops)
        rep = check_invariance(K, ops)
        instances += 1
        if not rep.passed:
            failures.append(f"instance {i}: {rep.discrepancies[:2]}")
    for name in sorted(CATALOG):
        K = gen_example(name)
        seqs = [[SubdivisionOp("grid", factors=2)], [SubdivisionOp("grid", factors=3)]]
        for j in range(4):
            seqs.append(random_ops(random.Random(f"{name}:{j}"), K)[0])
        for ops in seqs:
            rep = check_invariance(K, ops)
            instances += 1
            if not rep.passed:
                failures.append(f"{name} {[o.to_json() for o in ops]}: {rep.discrepancies[:2]}")
    globe_ops = [(0, [SubdivisionOp("edge", cell="t", k=2)]),
                 (1, [SubdivisionOp("lens", cell="t")]),
                 (2, [SubdivisionOp("edge", cell="e1+", k=1), SubdivisionOp("lens", cell="e2+")]),
                 (3, [SubdivisionOp("lens", cell="e2-"), SubdivisionOp("edge", cell="e1-", k=2)])]
    for n, ops in globe_ops:
        rep = check_invariance(globe(n), ops)
        instances += 1
        if not rep.passed:
            failures.append(f"globe({n}) {[o.to_json() for o in ops]}: {rep.discrepancies[:2]}")
    if set(kinds) != {"edge", "lens", "grid"}:
        failures.append(f"op kinds exercised: {sorted(kinds)}")
    if fuzzed < 200:
        failures.append(f"only {fuzzed} fuzzed instances carried ops")
    ok = record(3, "subdivision invariance", not failures, time.perf_counter() - t0, 60.0,
                "; ".join(failures[:3]) or f"{instances} instances ({fuzzed} fuzzed with ops), ops {dict(sorted(kinds.items()))}, "
                "homology and old-state pi0 unchanged")
    assert ok, failures


def test_4_flow_oracle():
    t0 = time.perf_counter()
    failures = []
    checked = 0
    for X in catalog():
        rep = oracle_check(X)
        checked += 1
        if not rep.passed:
            failures.append(rep.lines()[0])
    for i, X in enumerate(fuzz_corpus(500, 4)):
        rep = oracle_check(X)
        checked += 1
        if not rep.passed:
            failures.append(f"fuzz {i}: {rep.lines()[0]}")
    ok = record(4, "flow oracle", not failures, time.perf_counter() - t0, 60.0,
                "; ".join(failures[:3]) or f"{checked} complexes, zero mismatches")
    assert ok, failures


def test_5_chain_level_soundness():
    t0 = time.perf_counter()
    failures = []
    complexes = 0
    corpus = catalog() + list(fuzz_corpus(500, 5))
    for i in range(100):
        rng = instance_rng(SEED + 50, i)
        K = random_precubical(rng)
        ops, _ = random_ops(rng, K)
        Y = apply_ops(K, ops)
        corpus.append(realize(Y) if isinstance(Y, PrecubicalSet) else Y)
    for X in corpus:
        for Y in (X, op(X)):
            complexes += 1
            for side in ("branch", "merge"):
                bad = d_squared(Y, side)
                if bad:
                    failures.append(f"{side} dd != 0 at {bad[:3]}")
    rng = random.Random(SEED + 5)
    for _ in range(1000):
        A = random_matrix(rng, rng.randint(1, 40), rng.randint(1, 40))
        problems = check_snf(A, snf(A))
        if problems:
            failures.append(f"snf of {len(A)}x{len(A[0])}: {problems[:2]}")
    ok = record(5, "chain-level soundness", not failures, time.perf_counter() - t0, 30.0,
                "; ".join(failures[:3]) or f"dd = 0 on {complexes} complexes (both sides), "
                "1000 SNF postconditions hold")
    assert ok, failures


def test_6_duality():
    t0 = time.perf_counter()
    failures = []
    corpus = catalog() + list(fuzz_corpus(200, 6))
    for i, X in enumerate(corpus):
        if op(op(X)) != X:
            failures.append(f"corpus {i}: op not an involution")
        if merging_homology(X) != branching_homology(op(X)):
            failures.append(f"corpus {i}: H+ != H-(op)")
    ok = record(6, "duality", not failures, time.perf_counter() - t0, 5.0,
                "; ".join(failures[:3]) or f"{len(corpus)} complexes")
    assert ok, failures


def test_7_torus_regression():
    t0 = time.perf_counter()
    X = realize(gen_example("torus"))
    Hb, Hm = branching_homology(X), merging_homology(X)
    good = zero_beyond(Hb, 0) and zero_beyond(Hm, 0)
    ok = record(7, "torus regression", good, time.perf_counter() - t0, 1.0,
                f"H- = {[str(g) for g in Hb.values()]}, H+ = {[str(g) for g in Hm.values()]}")
    assert ok


if __name__ == "__main__":
    status = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            try:
                fn()
            except AssertionError:
                status = 1
    sys.exit(status)
