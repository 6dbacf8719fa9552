"""Benchmark the numba-compiled kernels against the pure-Python fallback.

Runs the same workloads through both kernel implementations, checks that
the results agree bit for bit, and reports best-of-N wall times:

    python -m lvcorridor.benchmark [--repeats N]

If numba is unavailable (or disabled via LVCORRIDOR_DISABLE_NUMBA=1) only
the pure-Python path is timed.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import _kernels
from .integrator import SolverConfig, integrate
from .model import Params, near_critical_family


def _with_kernels(advance, rk4, fn):
    """Run fn() with the module-level kernel bindings swapped."""
    saved = (_kernels.rk45_advance, _kernels.rk4_final)
    _kernels.rk45_advance, _kernels.rk4_final = advance, rk4
    try:
        return fn()
    finally:
        _kernels.rk45_advance, _kernels.rk4_final = saved


def _best_of(fn, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def _workloads():
    pa = Params(0.48, 0.55, 1.0)
    pnc = near_critical_family(0.0125)
    return [
        ("transient run (t_max=200)",
         lambda: integrate(pa, (0.2, 0.8)).ys[-1]),
        ("near-critical slow run (t_max=4000)",
         lambda: integrate(pnc, (0.3, 0.6), SolverConfig(t_max=4000.0)).ys[-1]),
        ("fixed-step RK4 reference (2e6 steps)",
         lambda: np.array(_kernels.rk4_final(0.48, 0.55, 1.0, 0.9, 0.9,
                                             1e-4, 2_000_000))),
    ]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="python -m lvcorridor.benchmark")
    ap.add_argument("--repeats", type=int, default=5,
                    help="timing repetitions per workload (default 5)")
    args = ap.parse_args(argv)

    py = (_kernels._rk45_advance_impl, _kernels._rk4_final_impl)
    if _kernels.NUMBA_ENABLED:
        nb = (_kernels.rk45_advance, _kernels.rk4_final)
        # trigger compilation outside the timed region
        _with_kernels(*nb, lambda: integrate(Params(0.5, 0.5), (0.4, 0.4),
                                             SolverConfig(t_max=1.0)))
        _with_kernels(*nb, lambda: _kernels.rk4_final(0.5, 0.5, 1.0,
                                                      0.4, 0.4, 1e-2, 10))
    else:
        nb = None
        print("numba path unavailable (not installed or disabled); "
              "timing pure Python only")

    print(f"{'workload':<42}{'python':>12}{'numba':>12}{'speedup':>10}")
    for name, fn in _workloads():
        t_py, r_py = _best_of(lambda: _with_kernels(*py, fn), args.repeats)
        if nb is None:
            print(f"{name:<42}{t_py:>11.4f}s{'-':>12}{'-':>10}")
            continue
        t_nb, r_nb = _best_of(lambda: _with_kernels(*nb, fn), args.repeats)
        if not np.array_equal(r_py, r_nb):
            print(f"{name:<42}  BACKEND MISMATCH: {r_py} vs {r_nb}")
            return 1
        print(f"{name:<42}{t_py:>11.4f}s{t_nb:>11.4f}s{t_py / t_nb:>9.1f}x")
    if nb is not None:
        print("results bit-identical across backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
