"""Time the pair-scan kernels on both backends and check they agree.

Usage: python benchmarks/bench_kernels.py [--grid 4096] [--repeat 3]
"""

from __future__ import annotations

import argparse
import os
import time

import numpy as np

from ribbonknots import fixtures, kernels
from ribbonknots.intersect import _min_sep_index


def _inputs(n: int):
    frame = fixtures.trefoil_flip_frame(n)
    smp = frame.samples
    sep = _min_sep_index(frame.tol.sep_lambda, n)
    return {
        "arc_crossings": (kernels.arc_crossings, (smp.u, sep)),
        "close_pairs": (kernels.close_pairs, (smp.x, sep, 0.05)),
        "parallel_chord_cells": (kernels.parallel_chord_cells, (smp.x, smp.u, sep)),
    }


def _best(fn, args, repeat: int) -> tuple[float, object]:
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return abs(a[0] - b[0]) < 1e-12 and np.array_equal(a[2], b[2])
    return np.array_equal(a, b)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cases = _inputs(args.grid)
    results: dict[str, dict[str, tuple[float, object]]] = {}
    backends = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])
    for name in backends:
        os.environ["RIBBON_KERNELS"] = name
        if name == "numba":
            t0 = time.perf_counter()
            kernels.warmup()
            print(f"numba warmup (compile or cache load): {time.perf_counter() - t0:.2f} s")
        results[name] = {k: _best(fn, a, args.repeat) for k, (fn, a) in cases.items()}

    print(f"grid n = {args.grid}, best of {args.repeat}")
    print(f"{'kernel':<22}" + "".join(f"{b:>12}" for b in backends) + ("     speedup  agree" if len(backends) > 1 else ""))
    for k in cases:
        row = f"{k:<22}" + "".join(f"{results[b][k][0] * 1e3:>10.1f}ms" for b in backends)
        if len(backends) > 1:
            tn, tb = results["numpy"][k][0], results["numba"][k][0]
            row += f"  {tn / tb:>9.1f}x  {_same(results['numpy'][k][1], results['numba'][k][1])}"
        print(row)
    if not kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy path was timed")


if __name__ == "__main__":
    main()
