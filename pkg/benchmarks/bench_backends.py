#!/usr/bin/env python3
"""Compare the compiled step-function kernels against the numpy fallback.

The workloads mirror how the library actually calls the kernels: many small
weighted samples (risk evaluation inner loops) and a handful of larger ones.
Run from the repo root after installing:

    python3 benchmarks/bench_backends.py
"""

from __future__ import annotations

import time

import numpy as np

from specrisk import BACKEND, get_backend
from specrisk.distortion import Distortion


def make_case(rng, n):
    values = np.ascontiguousarray(np.round(rng.normal(scale=4.0, size=n), 3))
    weights = np.ascontiguousarray(rng.dirichlet(np.ones(n)))
    return values, weights


def bench(kernels, cases, phi):
    t0 = time.perf_counter()
    acc = 0.0
    for values, weights in cases:
        bv, cp = kernels.sort_merge(np.abs(values), weights)
        prefix = kernels.prefix_integrals(bv, cp)
        inc = phi.increments(cp)
        acc += kernels.spectral_sum(bv, inc)
        ts = cp[1:-1] if cp.size > 2 else cp[1:]
        ts = np.ascontiguousarray(ts)
        pv = np.ascontiguousarray(phi(ts))
        acc += kernels.sup_scaled_average(ts, pv, cp, prefix)
        grid = np.ascontiguousarray(phi(np.linspace(0.0, 1.0, values.size + 1)))
        acc += float(kernels.rank_weights(values, grid).sum())
    return time.perf_counter() - t0, acc


def main():
    rng = np.random.default_rng(0)
    sizes = {
        "small  (n=16,   x2000)": [make_case(rng, 16) for _ in range(2000)],
        "medium (n=256,  x400)": [make_case(rng, 256) for _ in range(400)],
        "large  (n=8192, x40)": [make_case(rng, 8192) for _ in range(40)],
    }
    phi = Distortion.power_complement(2)
    backends = {}
    for name in ("python", "compiled"):
        try:
            backends[name] = get_backend(name)
        except ImportError:
            print(f"backend {name!r} unavailable, skipping")

    print(f"default backend: {BACKEND}\n")
    print(f"{'workload':24s}" + "".join(f"{name:>12s}" for name in backends) + f"{'speedup':>10s}")
    for label, cases in sizes.items():
        times = {}
        check = None
        for name, mod in backends.items():
            # warm up once, then best of 3
            bench(mod, cases[: max(1, len(cases) // 10)], phi)
            best = min(bench(mod, cases, phi) for _ in range(3))
            times[name] = best[0]
            if check is None:
                check = best[1]
            elif abs(check - best[1]) > 1e-6 * max(1.0, abs(check)):
                raise SystemExit(f"backend results disagree on {label}: {check} vs {best[1]}")
        row = f"{label:24s}" + "".join(f"{times[name]:>11.3f}s" for name in backends)
        if len(times) == 2:
            row += f"{times['python'] / times['compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
