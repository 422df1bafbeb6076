"""Benchmark of the hot monomial-sum kernel: numba JIT vs pure numpy.

Measures wall-clock time of ``weighted_monomial_sum`` (the kernel behind all
batched evaluations: kernel rows, derivative sections, Monte Carlo checks,
boundary sup estimates) on both backends over several repeats.

The numpy path is always measured; the numba path only when numba imports.
A warm-up call is excluded from the numba timing so JIT compilation does not
pollute the numbers.  Both paths are checked to agree to 1e-12 relative.

Run:

    python benchmarks/bench_accel.py

Force the pure numpy path at package level with BCMETRICS_DISABLE_NUMBA=1.
"""

import statistics
import time

import numpy as np

from bcmetrics import build_basis, sample_interior, unit_ball
from bcmetrics.accel import numpy_weighted_monomial_sum

try:
    from bcmetrics.accel import _build_numba_kernel

    numba_kernel = _build_numba_kernel()
    HAVE_NUMBA = True
except ImportError:
    numba_kernel = None
    HAVE_NUMBA = False

POINTS = 200_000
DEGREE_CAP = 16
REPEATS = 5


def make_workload():
    domain = unit_ball(2)
    basis = build_basis(domain, DEGREE_CAP)
    samples = sample_interior(domain, POINTS, seed=42)
    rng = np.random.default_rng(7)
    coeffs = rng.standard_normal(basis.size) + 1j * rng.standard_normal(basis.size)
    weights = np.ascontiguousarray(coeffs * basis.normalizers)
    points = np.ascontiguousarray(samples.points)
    exps = np.ascontiguousarray(basis.exponents)
    return points, exps, weights


def time_fn(fn, *args, repeats=REPEATS):
    durations = []
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        durations.append(time.perf_counter() - t0)
    return result, durations


def main():
    points, exps, weights = make_workload()
    print(
        f"workload: {points.shape[0]} points x {exps.shape[0]} basis entries "
        f"(degree cap {DEGREE_CAP}, complex128)"
    )

    ref, np_times = time_fn(numpy_weighted_monomial_sum, points, exps, weights)

    rows = [("numpy", np_times, 0.0)]
    if HAVE_NUMBA:
        print("[warmup] compiling the numba kernel (excluded from timing)")
        numba_kernel(points[:64], exps, weights)
        out, nb_times = time_fn(numba_kernel, points, exps, weights)
        rel = float(
            np.max(np.abs(out - ref)) / max(1.0, float(np.max(np.abs(ref))))
        )
        assert rel < 1e-12, f"backend mismatch: relative deviation {rel:.3e}"
        rows.append(("numba", nb_times, rel))
    else:
        print("[info] numba not importable; benchmarking the numpy path only")

    print(f"\n{'backend':10s} {'mean(s)':>10s} {'std(s)':>9s} {'per call':>12s}")
    print("-" * 45)
    for name, times, _ in rows:
        mean = statistics.mean(times)
        std = statistics.pstdev(times) if len(times) > 1 else 0.0
        print(f"{name:10s} {mean:10.4f} {std:9.4f} {mean / 1:12.4f}")

    if HAVE_NUMBA:
        speedup = statistics.mean(np_times) / statistics.mean(rows[1][1])
        print(f"\nspeedup (numpy / numba): {speedup:.2f}x")
        print(f"max relative deviation between paths: {rows[1][2]:.2e}")


if __name__ == "__main__":
    main()
