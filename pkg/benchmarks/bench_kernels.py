#!/usr/bin/env python3
"""Timing comparison of the compiled kernels against the pure-Python fallback.

Runs each kernel on realistic workloads (the sizes the estimators actually
produce at the acceptance-criteria densities) and reports per-call medians
and the speedup.  Usage:

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import math
import statistics
import time

import numpy as np

from secgraph.kernels import _fallback, backend_name

try:
    from secgraph.kernels import _core
except ImportError:
    _core = None


def _time(fn, args, repeat):
    out = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        out.append(time.perf_counter() - t0)
    return statistics.median(out)


def _cell_area_args(rng):
    # typical-cell workload: ~200 candidates sorted by distance
    n = 200
    r = 8.0 * np.sqrt(rng.random(n))
    t = rng.uniform(0, 2 * math.pi, n)
    order = np.argsort(r)
    return (
        np.ascontiguousarray((r * np.cos(t))[order]),
        np.ascontiguousarray((r * np.sin(t))[order]),
        4.0,
    )


def _count_in_cell_args(rng):
    # one 256-trial block at the in-degree window for lambda_e = 0.4
    trials = 256
    nl = rng.poisson(90.0, trials)
    ne = rng.poisson(150.0, trials)
    loff = np.zeros(trials + 1, dtype=np.int64)
    eoff = np.zeros(trials + 1, dtype=np.int64)
    np.cumsum(nl, out=loff[1:])
    np.cumsum(ne, out=eoff[1:])
    return (
        rng.normal(size=loff[-1]),
        rng.normal(size=loff[-1]),
        loff,
        rng.normal(size=eoff[-1]),
        rng.normal(size=eoff[-1]),
        eoff,
    )


def _neutral_survivors_args(rng):
    # guard-radius filtering at the widest neutralization window
    ne, nl = 400, 1200
    return (
        rng.uniform(-10, 10, ne),
        rng.uniform(-10, 10, ne),
        rng.uniform(-10, 10, nl),
        rng.uniform(-10, 10, nl),
        0.5,
    )


WORKLOADS = {
    "cell_area": _cell_area_args,
    "count_in_cell": _count_in_cell_args,
    "neutral_survivors": _neutral_survivors_args,
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=21, help="timed calls per kernel (median reported)")
    args = ap.parse_args()

    print(f"active backend: {backend_name()}")
    if _core is None:
        print("compiled extension not importable; timing the fallback only\n")
    rng = np.random.default_rng(2024)

    print(f"{'kernel':<20s} {'fallback':>12s} {'compiled':>12s} {'speedup':>9s}")
    for name, make in WORKLOADS.items():
        call_args = make(rng)
        t_fb = _time(getattr(_fallback, name), call_args, args.repeat)
        if _core is not None:
            t_c = _time(getattr(_core, name), call_args, args.repeat)
            print(f"{name:<20s} {t_fb * 1e3:>10.3f}ms {t_c * 1e3:>10.3f}ms {t_fb / t_c:>8.1f}x")
        else:
            print(f"{name:<20s} {t_fb * 1e3:>10.3f}ms {'-':>12s} {'-':>9s}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
