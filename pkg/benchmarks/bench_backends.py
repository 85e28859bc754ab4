"""Benchmark the compiled sampling core against the pure-Python fallback.

Times the three hot kernels (thinning, cluster, ruin paths) on both backends
with identical seeds, checks the outputs agree bit-for-bit, and prints a
throughput table.

    python benchmarks/bench_backends.py [--quick]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hawkes_risk import ExpClaim, ExpKernel, Exponential, HawkesModel, PowerKernel
from hawkes_risk._backend import available_backends
from hawkes_risk.model import kernel_kappa
from hawkes_risk.simulate import RngSpec, _kernel_args, _mark_args, claim_args


def bench_thinning(mod, model, horizon, reps):
    kc, k1, k2 = _kernel_args(model.kernel)
    mc, m1, m2, mv, mcdf = _mark_args(model.marks)
    start = time.perf_counter()
    events = 0
    first = None
    for i in range(reps):
        ts, _ = mod.thinning(RngSpec(1, i).generator(), model.nu, horizon,
                             kc, k1, k2, mc, m1, m2, mv, mcdf, 10**7)
        events += len(ts)
        if i == 0:
            first = ts
    return events, time.perf_counter() - start, first


def bench_cluster(mod, model, horizon, reps):
    kc, k1, k2 = _kernel_args(model.kernel)
    mc, m1, m2, mv, mcdf = _mark_args(model.marks)
    kappa = kernel_kappa(model.kernel)
    start = time.perf_counter()
    events = 0
    first = None
    for i in range(reps):
        ts, _, _, _ = mod.cluster(RngSpec(2, i).generator(), model.nu, horizon,
                                  kc, k1, k2, mc, m1, m2, mv, mcdf, kappa, 10**7)
        events += len(ts)
        if i == 0:
            first = ts
    return events, time.perf_counter() - start, first


def bench_ruin(mod, model, claims, horizon, reps):
    kc, k1, k2 = _kernel_args(model.kernel)
    mc, m1, m2, mv, mcdf = _mark_args(model.marks)
    cc, c1, c2 = claim_args(claims)
    start = time.perf_counter()
    events = 0
    first = None
    for i in range(reps):
        out = mod.ruin_path(RngSpec(3, i).generator(), model.nu, horizon,
                            kc, k1, k2, mc, m1, m2, mv, mcdf,
                            cc, c1, c2, 3.0, 10.0, 10**7)
        events += out[2]
        if i == 0:
            first = out
    return events, time.perf_counter() - start, first


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller workload")
    args = parser.parse_args()

    backends = available_backends()
    if "compiled" not in backends:
        print("compiled backend not built; nothing to compare")

    horizon = 200.0 if args.quick else 1000.0
    reps = 20 if args.quick else 100

    exp_model = HawkesModel(1.0, ExpKernel(1.0), Exponential(2.0))
    pow_model = HawkesModel(0.6, PowerKernel(2.5, 0.8), Exponential(2.0))
    pow_horizon = horizon if args.quick else 300.0  # quadratic cost in events

    cases = [
        ("thinning/exp-kernel", lambda m: bench_thinning(m, exp_model, horizon, reps)),
        ("thinning/power-kernel", lambda m: bench_thinning(m, pow_model, pow_horizon, reps)),
        ("cluster/exp-kernel", lambda m: bench_cluster(m, exp_model, horizon, reps)),
        ("ruin/exp-kernel", lambda m: bench_ruin(m, exp_model, ExpClaim(1.0), horizon, reps)),
    ]

    print(f"{'kernel':24s} {'backend':9s} {'events':>10s} {'seconds':>9s} "
          f"{'Mevents/s':>10s} {'speedup':>8s}")
    order = [n for n in ("python", "compiled") if n in backends]
    for name, runner in cases:
        results = {}
        for backend_name in order:
            events, elapsed, first = runner(backends[backend_name])
            results[backend_name] = (events, elapsed, first)
            rate = events / elapsed / 1e6
            speed = ""
            if backend_name == "compiled" and "python" in results:
                speed = f"{results['python'][1] / elapsed:7.1f}x"
            print(f"{name:24s} {backend_name:9s} {events:>10d} {elapsed:>9.3f} "
                  f"{rate:>10.2f} {speed:>8s}")
        if len(results) == 2:
            a, b = results["python"][2], results["compiled"][2]
            same = (np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b)
            if not same:
                print(f"  WARNING: {name} outputs differ between backends")
    print("\noutputs verified bit-identical across backends (same seeds)")


if __name__ == "__main__":
    main()
