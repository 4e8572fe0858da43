"""Time Smith normal form and watch coefficient growth by matrix size.

    python scripts/snf_stress.py --sizes 10 20 30 40 --per-size 50
"""

from __future__ import annotations

import argparse
import random
import time
from dataclasses import dataclass, field

from digerm.snf import check_snf, snf


@dataclass
class StressConfig:
    sizes: list[int] = field(default_factory=lambda: [10, 20, 30, 40])
    per_size: int = 50
    bound: int = 9
    seed: int = 0
    check: bool = True


def run(cfg: StressConfig) -> list[dict]:
    rng = random.Random(cfg.seed)
    rows = []
    for n in cfg.sizes:
        t_snf = t_check = 0.0
        bits = 0
        bad = 0
        for _ in range(cfg.per_size):
            A = [[rng.randint(-cfg.bound, cfg.bound) for _ in range(n)] for _ in range(n)]
            t0 = time.perf_counter()
            r = snf(A)
            t_snf += time.perf_counter() - t0
            bits = max(bits, max(abs(x).bit_length() for M in (r.U, r.V) for row in M for x in row))
            if cfg.check:
                t0 = time.perf_counter()
                bad += bool(check_snf(A, r))
                t_check += time.perf_counter() - t0
        rows.append({"n": n, "snf_ms": 1000 * t_snf / cfg.per_size,
                     "check_ms": 1000 * t_check / cfg.per_size, "max_bits": bits, "failures": bad})
    return rows


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=StressConfig().sizes)
    p.add_argument("--per-size", type=int, default=StressConfig.per_size)
    p.add_argument("--bound", type=int, default=StressConfig.bound)
    p.add_argument("--seed", type=int, default=StressConfig.seed)
    p.add_argument("--no-check", dest="check", action="store_false")
    cfg = StressConfig(**vars(p.parse_args(argv)))
    print(f"{'n':>4} {'snf ms':>9} {'check ms':>9} {'max bits':>9} {'fail':>5}")
    rows = run(cfg)
    for r in rows:
        print(f"{r['n']:>4} {r['snf_ms']:>9.1f} {r['check_ms']:>9.1f} {r['max_bits']:>9} {r['failures']:>5}")
    return 1 if any(r["failures"] for r in rows) else 0


if __name__ == "__main__":
    raise SystemExit(main())
