"""Timing comparison of the compiled and pure-Python kernel backends.

Runs each raw kernel on large batches, then the end-to-end norm-table
workload, once per available backend, and prints a speedup table.

    python3 benchmarks/bench_kernels.py [--n 2000000] [--repeat 5]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from pogorelov import assembly, kernels, regularity


def best_of(repeat, fn, *args, **kwargs):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args, **kwargs)
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=2_000_000,
                        help="batch size for the raw kernel timings")
    parser.add_argument("--repeat", type=int, default=5,
                        help="repetitions per measurement (best is reported)")
    args = parser.parse_args()

    backends = kernels.available_backends()
    impls = list(backends)
    print(f"backends available: {', '.join(impls)}")
    print(f"active default: {kernels.get_backend()}")

    a = 0.125
    rng = np.random.default_rng(0)
    rho = rng.uniform(0.0, a, args.n) * (1.0 - 1e-12)
    theta = rng.uniform(0.0, 2.0 * np.pi, args.n)
    rad = rng.uniform(1e-6, a, args.n)
    x = rad * np.cos(theta)
    y = rad * np.sin(theta)
    field = assembly.make_metric_field(25)

    workloads = [
        ("profile_eval k=0", lambda impl: kernels.profile_eval(rho, a, 0, impl=impl)),
        ("profile_eval k=3", lambda impl: kernels.profile_eval(rho, a, 3, impl=impl)),
        ("deviation_eval", lambda impl: kernels.deviation_eval(rho, a, impl=impl)),
        ("metric_scalars", lambda impl: kernels.metric_scalars(rad, a, impl=impl)),
        ("metric_tensors", lambda impl: kernels.metric_tensors(x, y, a, impl=impl)),
        ("norm table (13 discs, 96 grid)",
         lambda impl: regularity.estimate_norm_table(field, ns=range(1, 14),
                                                     grid_n=96, impl=impl)),
    ]

    width = max(len(name) for name, _ in workloads)
    header = f"{'workload':<{width}}  " + "".join(f"{impl:>12}" for impl in impls)
    if len(impls) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, run in workloads:
        times = [best_of(args.repeat, run, backends[impl]) for impl in impls]
        line = f"{name:<{width}}  " + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            line += f"{times[impls.index('python')] / times[impls.index('compiled')]:>9.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
