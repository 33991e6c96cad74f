"""Timings for the hot kernels, compiled extension against the numpy reference.

Run as ``python benchmarks/bench_kernels.py [--repeats N]``.  Workloads are
deterministic; each cell reports the best of ``N`` runs so background noise
only ever slows a row down, never speeds it up.
"""

import argparse
import time

import numpy as np

from excessgrowth._kernels import _ref

try:
    from excessgrowth._kernels import _fast
except ImportError:
    _fast = None


def best_of(repeats, fn, *args):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def row_workloads(rng):
    for k, n in ((100, 5), (1000, 20), (10000, 50)):
        w = rng.dirichlet(np.ones(n))
        r = rng.normal(0.0, 0.5, (k, n))
        yield f"egr_log_rows K={k} n={n}", (w, r)


def ascent_workloads(rng):
    for k, n, budget in ((5, 3, 20000), (50, 10, 20000), (200, 25, 5000)):
        scen = rng.normal(0.0, 0.3, (k, n))
        p = np.full(k, 1.0 / k)
        c = 1.0 / (1.0 + np.abs(scen).max())
        shifted = np.exp(scen - scen.max(axis=1, keepdims=True))
        args = (shifted, p, p @ scen, c, np.full(n, 1.0 / n), budget, 0.0, 100)
        yield f"mirror_ascent K={k} n={n} T={budget}", args


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    opts = parser.parse_args()

    print(f"{'workload':34s} {'reference':>12s} {'compiled':>12s} {'speedup':>8s}")
    for maker, fn_name in ((row_workloads, "egr_log_rows"), (ascent_workloads, "mirror_ascent")):
        for label, args in maker(np.random.default_rng(0)):
            t_ref = best_of(opts.repeats, getattr(_ref, fn_name), *args)
            if _fast is None:
                print(f"{label:34s} {t_ref * 1e3:10.3f} ms {'unavailable':>12s}")
                continue
            t_fast = best_of(opts.repeats, getattr(_fast, fn_name), *args)
            print(
                f"{label:34s} {t_ref * 1e3:10.3f} ms {t_fast * 1e3:10.3f} ms "
                f"{t_ref / t_fast:7.1f}x"
            )


if __name__ == "__main__":
    main()
