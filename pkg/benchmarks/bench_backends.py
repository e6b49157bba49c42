"""Benchmark the packed bit-mode kernels: numba loops vs vectorized numpy.

Runs the same simulation under each available backend and reports wall time
per slot.  The first numba call compiles, so one warm-up run is timed
separately.

    python3 benchmarks/bench_backends.py --dim 2 --k 200 --slots 50
"""

import argparse
import time

from gridnc import backends
from gridnc.fastsim import simulate_bits
from gridnc.tables import build_tables
from gridnc.topology import build_grid


def time_run(cfg, slots, backend, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = simulate_bits(cfg, slots, seed=0, backend=backend)
        best = min(best, time.perf_counter() - start)
    assert result.violations == 0, f"{backend}: {result.violations} decode failures"
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=2)
    parser.add_argument("--k", type=int, default=200)
    parser.add_argument("--slots", type=int, default=50)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    cfg = build_grid(args.dim, args.k)
    build_tables(cfg)  # exclude table compilation from the timings
    print(f"grid d={cfg.d} K={cfg.K}: {cfg.node_count} nodes, "
          f"{cfg.internal_count} internal, {args.slots} slots")

    names = backends.available()
    if "numba" in names:
        start = time.perf_counter()
        simulate_bits(cfg, 1, seed=0, backend="numba")
        print(f"numba warm-up (jit compile): {time.perf_counter() - start:.2f}s")

    timings = {}
    for name in names:
        timings[name] = time_run(cfg, args.slots, name, args.repeat)

    print(f"\n{'backend':<10}{'total':>12}{'per slot':>14}")
    for name, total in timings.items():
        print(f"{name:<10}{total:>11.4f}s{total / args.slots * 1e3:>12.3f}ms")
    if len(timings) == 2:
        ratio = timings["numpy"] / timings["numba"]
        print(f"\nnumba speedup over numpy: {ratio:.2f}x")


if __name__ == "__main__":
    main()
