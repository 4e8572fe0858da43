"""Run a fuzz campaign and summarize what it covered.

    python scripts/fuzz_campaign.py --seed 0 --count 1000 --out runs/fuzz0.json

Each instance draws a random precubical set, checks the flow oracle and
duality on its realization, then applies a random subdivision sequence and
checks invariance.  The summary reports coverage (dimensions, sizes, op
kinds) alongside failures so a green run can be judged for what it tested.
"""

from __future__ import annotations

import argparse
import json
import time
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from digerm.fuzz import run_fuzz, thread_cap


@dataclass
class CampaignConfig:
    seed: int = 0
    count: int = 500
    threads: int = 0  # 0: DIGERM_THREADS or cpu count
    out: str | None = None


def summarize(results) -> dict:
    dims = Counter(len(r.census) - 1 for r in results)
    sizes = [sum(r.census) for r in results]
    kinds = Counter(o["kind"] for r in results for o in r.ops)
    lengths = Counter(len(r.ops) for r in results)
    return {
        "instances": len(results),
        "failed": sum(1 for r in results if not r.passed),
        "max_dim": dict(sorted(dims.items())),
        "cubes": {"min": min(sizes, default=0), "max": max(sizes, default=0),
                  "mean": round(sum(sizes) / max(len(sizes), 1), 1)},
        "op_kinds": dict(sorted(kinds.items())),
        "sequence_lengths": dict(sorted(lengths.items())),
    }


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=CampaignConfig.seed)
    p.add_argument("--count", type=int, default=CampaignConfig.count)
    p.add_argument("--threads", type=int, default=CampaignConfig.threads)
    p.add_argument("--out")
    cfg = CampaignConfig(**vars(p.parse_args(argv)))
    t0 = time.perf_counter()
    results = run_fuzz(cfg.seed, cfg.count, threads=cfg.threads or thread_cap())
    summary = summarize(results)
    summary["seconds"] = round(time.perf_counter() - t0, 2)
    print(json.dumps(summary, indent=2))
    for r in results:
        if not r.passed:
            print(f"instance {r.index}: {r.failures[:3]}")
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text(json.dumps({"config": vars(cfg), "summary": summary,
                                             "instances": [r.to_json() for r in results]}, indent=1))
    return 1 if summary["failed"] else 0


if __name__ == "__main__":
    raise SystemExit(main())
