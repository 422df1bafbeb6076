"""Convex minimax over polynomials: minimize the sampled boundary sup norm.

Solves

    minimize  M = max_i |p(w_i)|
    over      polynomials p of total degree <= d
    subject   p(z) = 0,  (X . grad p)(z) = 1

by linear programming on the real and imaginary parts of the monomial
coefficients.  Each modulus constraint |p(w_i)| <= M is outer-approximated
by a regular polygon of half-planes Re(e^{-i theta} p(w_i)) <= M; after each
solve, cuts are added at the realized phases of all violated points until
the true modulus exceeds M by less than ``refine_tol``.  The LP solver is
HiGHS via scipy with tightened feasibility tolerances, so the whole
procedure is deterministic for fixed inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import MinimaxError

_FEAS_TOL = 1e-10


@dataclass
class MinimaxSolution:
    bound: float  # certified sampled sup norm M of the returned coefficients
    coeffs: np.ndarray  # complex monomial coefficients, same order as exps
    rounds: int
    cuts: int
    final_violation: float


def _monomial_matrix(points: np.ndarray, exps: np.ndarray) -> np.ndarray:
    m = points.shape[0]
    vals = np.ones((m, exps.shape[0]), dtype=np.complex128)
    for j in range(exps.shape[0]):
        for k in range(points.shape[1]):
            e = int(exps[j, k])
            if e:
                vals[:, j] *= points[:, k] ** e
    return vals


def _point_row(z: np.ndarray, exps: np.ndarray) -> np.ndarray:
    return _monomial_matrix(z[None, :], exps)[0]


def _deriv_row(z: np.ndarray, x: np.ndarray, exps: np.ndarray) -> np.ndarray:
    n = z.shape[0]
    out = np.zeros(exps.shape[0], dtype=np.complex128)
    for j in range(exps.shape[0]):
        acc = 0.0 + 0.0j
        for k in range(n):
            e = int(exps[j, k])
            if e == 0 or x[k] == 0:
                continue
            term = e * x[k]
            for m in range(n):
                shift = int(exps[j, m]) - (1 if m == k else 0)
                if shift:
                    term *= z[m] ** shift
            acc += term
        out[j] = acc
    return out


def solve_modulus_minimax(
    points: np.ndarray,
    exps: np.ndarray,
    z: np.ndarray,
    x: np.ndarray,
    initial_halfplanes: int = 32,
    refine_tol: float = 1e-8,
    max_rounds: int = 40,
) -> MinimaxSolution:
    """Run the cutting-plane LP.  Raises MinimaxError on infeasibility or stall."""
    if initial_halfplanes < 32:
        raise ValueError("initial_halfplanes must be >= 32")
    nterms = exps.shape[0]
    npts = points.shape[0]
    if npts == 0:
        raise ValueError("boundary sample set is empty")

    vals = _monomial_matrix(points, exps)
    vz = _point_row(z, exps)
    vdz = _deriv_row(z, x, exps)
    if np.max(np.abs(vdz)) == 0.0:
        raise MinimaxError(
            "derivative constraint is identically zero (degree 0 candidate space "
            "or zero direction); the interpolation problem is infeasible"
        )

    # variables: [Re c (nterms), Im c (nterms), M]
    nvars = 2 * nterms + 1
    objective = np.zeros(nvars)
    objective[-1] = 1.0
    a_eq = np.zeros((4, nvars))
    b_eq = np.zeros(4)
    a_eq[0, :nterms] = vz.real
    a_eq[0, nterms : 2 * nterms] = -vz.imag
    a_eq[1, :nterms] = vz.imag
    a_eq[1, nterms : 2 * nterms] = vz.real
    a_eq[2, :nterms] = vdz.real
    a_eq[2, nterms : 2 * nterms] = -vdz.imag
    b_eq[2] = 1.0
    a_eq[3, :nterms] = vdz.imag
    a_eq[3, nterms : 2 * nterms] = vdz.real

    bounds = [(None, None)] * (2 * nterms) + [(0.0, None)]
    options = {
        "primal_feasibility_tolerance": _FEAS_TOL,
        "dual_feasibility_tolerance": _FEAS_TOL,
    }

    angles = 2.0 * np.pi * np.arange(initial_halfplanes) / initial_halfplanes
    cut_points = np.repeat(np.arange(npts), initial_halfplanes)
    cut_angles = np.tile(angles, npts)

    coeffs = None
    bound = np.inf
    violation = np.inf
    for rnd in range(max_rounds):
        phases = np.exp(-1j * cut_angles)[:, None] * vals[cut_points]
        a_ub = np.zeros((cut_points.shape[0], nvars))
        a_ub[:, :nterms] = phases.real
        a_ub[:, nterms : 2 * nterms] = -phases.imag
        a_ub[:, -1] = -1.0
        result = linprog(
            objective,
            A_ub=a_ub,
            b_ub=np.zeros(cut_points.shape[0]),
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=bounds,
            method="highs",
            options=options,
        )
        if not result.success:
            raise MinimaxError(
                f"LP solve failed in round {rnd}: status {result.status} "
                f"({result.message}); the constraints may be infeasible"
            )
        coeffs = result.x[:nterms] + 1j * result.x[nterms : 2 * nterms]
        moduli = np.abs(vals @ coeffs)
        bound = float(result.x[-1])
        violation = float(np.max(moduli) - bound)
        bad = np.nonzero(moduli - bound > refine_tol)[0]
        if bad.size == 0:
            certified = max(bound, float(np.max(moduli)))
            return MinimaxSolution(
                bound=certified,
                coeffs=coeffs,
                rounds=rnd + 1,
                cuts=cut_points.shape[0],
                final_violation=max(violation, 0.0),
            )
        new_angles = np.angle((vals @ coeffs)[bad])
        cut_points = np.concatenate([cut_points, bad])
        cut_angles = np.concatenate([cut_angles, new_angles])

    raise MinimaxError(
        f"cut refinement stalled after {max_rounds} rounds: "
        f"bound {bound!r}, residual modulus violation {violation:.3e}, "
        f"{cut_points.shape[0]} cuts"
    )
