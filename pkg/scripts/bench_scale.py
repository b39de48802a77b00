#!/usr/bin/env python3
"""Time compose() on a generated 10,000-service registry and report peak memory."""

from __future__ import annotations

import argparse
import random
import resource
import time
import tracemalloc

from compograph import compose, execution_order, simulate
from compograph.synth import layered_registry, layered_request


def run(n_services: int, seed: int) -> dict:
    rng = random.Random(seed)
    r = layered_registry(rng, n_services)
    req = layered_request(rng, r)
    tracemalloc.start()
    t0 = time.perf_counter()
    g = compose(r, req)
    elapsed = time.perf_counter() - t0
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    plan = execution_order(g)
    simulate(plan, req, r)
    return {
        "services": len(r),
        "selected": len(g.layers),
        "stages": len(plan.stages),
        "compose_seconds": elapsed,
        "compose_peak_mb": peak / 2**20,
        "process_maxrss_mb": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024,
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--services", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    for k in range(args.repeat):
        res = run(args.services, args.seed + k)
        print(" ".join(f"{key}={val:.3f}" if isinstance(val, float) else f"{key}={val}" for key, val in res.items()))


if __name__ == "__main__":
    main()
