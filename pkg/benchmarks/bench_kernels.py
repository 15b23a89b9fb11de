"""Benchmark the numba kernels against the pure-numpy fallback.

Run directly:

    python benchmarks/bench_kernels.py

The fallback path is what you get with PRIMEPOT_NO_NUMBA=1; here both
implementations are timed in one process by calling them explicitly.
"""

import time

import numpy as np

from primepot import _kernels
from primepot.grid import default_grid
from primepot.susy import KINETIC_HALF, design_potential
from primepot.sequences import first_primes


def time_call(func, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = func(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_riccati():
    grid = default_grid(12.0, 0.005)
    pot = design_potential(first_primes(10), grid)
    c = KINETIC_HALF
    q = (pot.values[grid.center_index :] - pot.asymptote + 27.0) / (c * c)
    h = grid.spacing

    rows = []
    if _kernels.NUMBA_ENABLED:
        _kernels._riccati_sweep_fast(q, h, c, 256)  # compile outside the clock
        t_fast, (w_fast, _) = time_call(_kernels._riccati_sweep_fast, q, h, c, 256)
        rows.append(("riccati_sweep", "numba", t_fast))
    t_py, (w_py, _) = time_call(_kernels._riccati_sweep_impl, q, h, c, 256)
    rows.append(("riccati_sweep", "python", t_py))
    if _kernels.NUMBA_ENABLED:
        assert np.allclose(w_fast, w_py, atol=1e-12)
    return rows


def bench_transfer():
    grid = default_grid(6.0, 0.0025)
    x = grid.x
    v = np.where(np.abs(x) < 4.0, 20.0 - 18.0 * np.cos(1.5 * x) ** 2, 0.0)
    cells = 0.5 * (v[:-1] + v[1:])
    energies = np.linspace(0.5, 25.0, 400)
    h = grid.spacing
    c = KINETIC_HALF

    rows = []
    if _kernels.NUMBA_ENABLED:
        _kernels._transfer_scan_fast(cells, h, energies, c, 0.0)
        t_fast, (tf, rf) = time_call(_kernels._transfer_scan_fast, cells, h, energies, c, 0.0)
        rows.append(("transfer_scan", "numba", t_fast))
    t_np, (tn, rn) = time_call(_kernels._transfer_scan_numpy, cells, h, energies, c, 0.0)
    rows.append(("transfer_scan", "numpy", t_np))
    if _kernels.NUMBA_ENABLED:
        assert np.allclose(tf, tn, atol=1e-10)
        assert np.allclose(rf, rn, atol=1e-10)
    return rows


def main():
    print(f"active backend: {_kernels.backend_name()}")
    rows = bench_riccati() + bench_transfer()
    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'path':<7}  best time")
    by_kernel = {}
    for kernel, path, t in rows:
        print(f"{kernel:<{width}}  {path:<7}  {t * 1e3:9.2f} ms")
        by_kernel.setdefault(kernel, {})[path] = t
    for kernel, paths in by_kernel.items():
        if len(paths) == 2:
            slow = max(paths.values())
            fast = min(paths.values())
            print(f"{kernel}: speedup x{slow / fast:.1f}")


if __name__ == "__main__":
    main()
