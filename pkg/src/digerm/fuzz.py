"""Randomized property harness.

Every instance draws its own ``random.Random`` from ``(seed, index)``, so a
run is reproducible and instances can be farmed out to worker processes
without changing the output.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .flowcat import oracle_check
from .globular import GlobularComplex, op, realize, validate_complex
from .homology import branching_homology, merging_homology
from .precubical import PrecubicalSet, random_precubical, validate
from .subdivision import (SubdivisionOp, check_invariance, subdivide_edge, subdivide_lens,
                          subdivide_precubical)

GRID_MAX_CUBES = 60


def instance_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"digerm:{seed}:{index}")


def lens_candidates(X: GlobularComplex) -> list[str]:
    out = []
    for c in X.cells:
        if c.dim == 2 and c.flow is not None and len(c.flow) == 2:
            if sorted(q for q, _ in c.flow) == [-1, 1]:
                out.append(c.id)
    return out


def random_ops(rng: random.Random, K: PrecubicalSet, max_len: int = 5,
               grid_max_cubes: int = GRID_MAX_CUBES) -> tuple[list[SubdivisionOp], GlobularComplex]:
    """A random applicable op sequence for ``K`` and the complex it produces.

    A grid step, if any, comes first since it only applies to precubical
    input; edge and lens steps follow on the realization.
    """
    length = rng.randint(1, max_len)
    ops: list[SubdivisionOp] = []
    cur = K
    if rng.random() < 0.4 and sum(K.census()) <= grid_max_cubes:
        if rng.random() < 0.5:
            factors = rng.choice([2, 3])
        else:
            factors = tuple(rng.randint(1, 2) for _ in range(max(K.max_dim, 1)))
        cur = subdivide_precubical(K, factors)
        ops.append(SubdivisionOp("grid", factors=factors))
    X = realize(cur)
    while len(ops) < length:
        edges = [c.id for c in X.cells if c.dim == 1]
        lenses = lens_candidates(X)
        if lenses and (not edges or rng.random() < 0.5):
            cid = rng.choice(lenses)
            X = subdivide_lens(X, cid)[0]
            ops.append(SubdivisionOp("lens", cell=cid))
        elif edges:
            cid = rng.choice(edges)
            k = rng.randint(1, 2)
            X = subdivide_edge(X, cid, k)[0]
            ops.append(SubdivisionOp("edge", cell=cid, k=k))
        else:
            break
    return ops, X


@dataclass
class InstanceResult:
    index: int
    census: tuple[int, ...]
    ops: list[dict] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"index": self.index, "census": list(self.census), "ops": self.ops,
                "pass": self.passed, "failures": self.failures}


def run_instance(seed: int, index: int) -> InstanceResult:
    rng = instance_rng(seed, index)
    K = random_precubical(rng)
    res = InstanceResult(index=index, census=K.census())
    rep = validate(K)
    if not rep.ok:
        res.failures.append("generator produced invalid precubical set: " + "; ".join(rep.lines()[:3]))
        return res
    X = realize(K)
    crep = validate_complex(X)
    if not crep.ok:
        res.failures.extend("realize: " + s for s in crep.lines()[:5])
        return res
    orep = oracle_check(X)
    if not orep.passed:
        res.failures.extend("oracle: " + s for s in orep.lines()[:5])
    if op(op(X)) != X:
        res.failures.append("op is not an involution")
    if merging_homology(X) != branching_homology(op(X)):
        res.failures.append("merging homology differs from branching homology of op")
    ops, Y = random_ops(rng, K)
    res.ops = [o.to_json() for o in ops]
    inv = check_invariance(K, ops)
    res.failures.extend("invariance: " + s for s in inv.discrepancies)
    yrep = oracle_check(Y)
    if not yrep.passed:
        res.failures.extend("oracle after ops: " + s for s in yrep.lines()[:5])
    return res


def _run(args):
    return run_instance(*args)


def thread_cap() -> int:
    env = os.environ.get("DIGERM_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            cap = max(1, min(cap, int(env)))
        except ValueError:
            pass
    return cap


def run_fuzz(seed: int, count: int, threads: int | None = None) -> list[InstanceResult]:
    threads = thread_cap() if threads is None else threads
    jobs = [(seed, i) for i in range(count)]
    if threads <= 1 or count < 8:
        return [run_instance(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run, jobs, chunksize=max(1, count // (4 * threads))))
