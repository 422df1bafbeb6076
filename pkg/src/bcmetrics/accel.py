"""Hot numeric kernels: batched monomial sums over point clouds.

Everything that loops over large sample arrays funnels through
``weighted_monomial_sum``, which evaluates

    out[i] = sum_j weights[j] * prod_k points[i, k] ** exps[j, k]

The numba-compiled version is used when numba is importable and the
environment variable ``BCMETRICS_DISABLE_NUMBA`` is unset; otherwise a pure
numpy path with per-coordinate power tables is used.  Both paths are
deterministic; they may differ by rounding at the 1e-15 level.

``benchmarks/bench_accel.py`` compares the two paths.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLE_FLAG = "BCMETRICS_DISABLE_NUMBA"


def _flag_disabled() -> bool:
    return os.environ.get(_DISABLE_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


def numpy_weighted_monomial_sum(
    points: np.ndarray, exps: np.ndarray, weights: np.ndarray
) -> np.ndarray:
    """Pure numpy path: power tables per coordinate, sequential over entries."""
    pts = np.ascontiguousarray(points, dtype=np.complex128)
    m, n = pts.shape
    max_exp = int(exps.max(initial=0))
    # tables[k][e] = points[:, k] ** e, built by repeated multiplication
    tables = np.empty((n, max_exp + 1, m), dtype=np.complex128)
    for k in range(n):
        tables[k, 0] = 1.0
        for e in range(1, max_exp + 1):
            tables[k, e] = tables[k, e - 1] * pts[:, k]
    out = np.zeros(m, dtype=np.complex128)
    for j in range(exps.shape[0]):
        term = np.full(m, weights[j], dtype=np.complex128)
        for k in range(n):
            e = int(exps[j, k])
            if e:
                term *= tables[k, e]
        out += term
    return out


def _build_numba_kernel():
    from numba import njit

    @njit(cache=True)
    def _kernel(points, exps, weights):  # pragma: no cover - compiled
        m, n = points.shape
        nterms = exps.shape[0]
        max_exp = 0
        for j in range(nterms):
            for k in range(n):
                if exps[j, k] > max_exp:
                    max_exp = exps[j, k]
        out = np.empty(m, dtype=np.complex128)
        powers = np.empty((n, max_exp + 1), dtype=np.complex128)
        for i in range(m):
            for k in range(n):
                powers[k, 0] = 1.0 + 0.0j
                base = points[i, k]
                for e in range(1, max_exp + 1):
                    powers[k, e] = powers[k, e - 1] * base
            acc = 0.0 + 0.0j
            for j in range(nterms):
                term = weights[j]
                for k in range(n):
                    term *= powers[k, exps[j, k]]
                acc += term
            out[i] = acc
        return out

    return _kernel


_numba_kernel = None
if not _flag_disabled():
    try:
        _numba_kernel = _build_numba_kernel()
    except ImportError:
        _numba_kernel = None


def backend() -> str:
    """Name of the active batch-evaluation backend."""
    return "numba" if _numba_kernel is not None else "numpy"


def weighted_monomial_sum(
    points: np.ndarray, exps: np.ndarray, weights: np.ndarray
) -> np.ndarray:
    """Evaluate sum_j weights[j] * points**exps[j] at every point."""
    pts = np.ascontiguousarray(points, dtype=np.complex128)
    ex = np.ascontiguousarray(exps, dtype=np.int64)
    w = np.ascontiguousarray(weights, dtype=np.complex128)
    if pts.ndim != 2 or ex.ndim != 2 or pts.shape[1] != ex.shape[1]:
        raise ValueError(f"shape mismatch: points {pts.shape}, exps {ex.shape}")
    if w.shape != (ex.shape[0],):
        raise ValueError(f"weights shape {w.shape} does not match {ex.shape[0]} entries")
    if _numba_kernel is not None:
        return _numba_kernel(pts, ex, w)
    return numpy_weighted_monomial_sum(pts, ex, w)
