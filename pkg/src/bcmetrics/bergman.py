"""Truncated orthonormal monomial bases and kernel evaluation.

The space of square-integrable holomorphic functions on a complete Reinhardt
domain has the normalized monomials

    h_alpha(z) = z^alpha / ||z^alpha||

as a complete orthonormal basis.  A ``BasisTable`` holds all entries with
total degree <= degree_cap in graded order; the kernel, its derivative
sections and the second-order diagonal data are finite sums over the table:

    kernel(w, z)        = sum_j h_j(w) conj(h_j(z))
    kernel_deriv(w, t)  = sum_j h_j(w) conj((X . grad h_j)(z))
    kernel_gram(t)      = (sum |h_j(z)|^2, sum h_j(z) conj(Xh_j(z)), sum |Xh_j(z)|^2)

Functions in the truncated span are represented by coefficient vectors over
the table; inner products of in-span functions are computed exactly in
coefficient space, never by quadrature.  Monte Carlo integration appears
only in the residual checks for the reproducing identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import accel
from .domains import (
    DomainSpec,
    MultiIndex,
    SampleSet,
    gauge,
    monomial_norm_sq,
    volume,
)


@dataclass(frozen=True)
class TangentData:
    """Base point z in the domain together with a direction vector X."""

    z: np.ndarray
    X: np.ndarray

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.z, dtype=np.complex128))
        x = np.atleast_1d(np.asarray(self.X, dtype=np.complex128))
        if z.shape != x.shape or z.ndim != 1:
            raise ValueError(f"point and direction shapes differ: {z.shape} vs {x.shape}")
        z.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "X", x)

    @property
    def dimension(self) -> int:
        return self.z.shape[0]


def tangent(z, X) -> TangentData:
    return TangentData(np.asarray(z), np.asarray(X))


def graded_multi_indices(dimension: int, degree_cap: int) -> list[tuple[int, ...]]:
    """All exponent tuples with |alpha| <= degree_cap in graded order.

    Within a degree, entries are ordered so that weight moves from the first
    coordinate to the last: (2,0), (1,1), (0,2).
    """
    out: list[tuple[int, ...]] = []
    for deg in range(degree_cap + 1):
        level: list[tuple[int, ...]] = []

        def fill(prefix: list[int], remaining: int, slot: int):
            if slot == dimension - 1:
                level.append(tuple(prefix + [remaining]))
                return
            for e in range(remaining, -1, -1):
                fill(prefix + [e], remaining - e, slot + 1)

        fill([], deg, 0)
        out.extend(level)
    return out


@dataclass(frozen=True)
class BasisTable:
    """Orthonormal basis entries h_j = normalizer_j * z^alpha_j, graded order."""

    domain: DomainSpec
    degree_cap: int
    exponents: np.ndarray  # (N, n) int64
    norms_sq: np.ndarray  # (N,)
    normalizers: np.ndarray  # (N,)

    def __post_init__(self):
        for name in ("exponents", "norms_sq", "normalizers"):
            arr = getattr(self, name)
            arr.setflags(write=False)

    @property
    def size(self) -> int:
        return self.exponents.shape[0]

    @property
    def dimension(self) -> int:
        return self.domain.dimension

    @property
    def entries(self) -> list[tuple[MultiIndex, float]]:
        return [
            (MultiIndex(tuple(int(e) for e in row)), float(c))
            for row, c in zip(self.exponents, self.normalizers)
        ]


def build_basis(domain: DomainSpec, degree_cap: int) -> BasisTable:
    """Build the truncated orthonormal basis table for the domain."""
    if degree_cap < 0:
        raise ValueError("degree_cap must be >= 0")
    indices = graded_multi_indices(domain.dimension, degree_cap)
    assert len(indices) == comb(domain.dimension + degree_cap, domain.dimension)
    norms_sq = np.array([monomial_norm_sq(domain, a) for a in indices])
    table = BasisTable(
        domain=domain,
        degree_cap=degree_cap,
        exponents=np.array(indices, dtype=np.int64),
        norms_sq=norms_sq,
        normalizers=1.0 / np.sqrt(norms_sq),
    )
    return table


# ---------------------------------------------------------------------------
# pointwise evaluation
# ---------------------------------------------------------------------------


def _power_table(z: np.ndarray, max_exp: int) -> np.ndarray:
    """tab[e, k] = z_k ** e, built by repeated multiplication."""
    n = z.shape[0]
    tab = np.empty((max_exp + 1, n), dtype=np.complex128)
    tab[0] = 1.0
    for e in range(1, max_exp + 1):
        tab[e] = tab[e - 1] * z
    return tab


def basis_values(basis: BasisTable, z) -> np.ndarray:
    """Vector of h_j(z) over the table."""
    z = np.asarray(z, dtype=np.complex128)
    tab = _power_table(z, basis.degree_cap)
    cols = np.arange(basis.dimension)
    mono = np.prod(tab[basis.exponents, cols], axis=1)
    return basis.normalizers * mono


def basis_deriv_values(basis: BasisTable, tangent: TangentData) -> np.ndarray:
    """Vector of directional derivatives (X . grad h_j)(z) over the table."""
    z = tangent.z
    x = tangent.X
    tab = _power_table(z, basis.degree_cap)
    cols = np.arange(basis.dimension)
    out = np.zeros(basis.size, dtype=np.complex128)
    for k in range(basis.dimension):
        if x[k] == 0:
            continue
        exps = basis.exponents
        active = exps[:, k] > 0
        if not np.any(active):
            continue
        shifted = exps[active].copy()
        shifted[:, k] -= 1
        mono = np.prod(tab[shifted, cols], axis=1)
        out[active] += x[k] * exps[active, k] * mono
    return basis.normalizers * out


def kernel(basis: BasisTable, w, z) -> complex:
    """Truncated kernel sum_j h_j(w) conj(h_j(z)).

    Hermitian symmetry kernel(w, z) == conj(kernel(z, w)) holds exactly as
    computed: the sum is evaluated in real arithmetic whose terms are
    symmetric under the swap, so swapping the arguments conjugates the
    result bit for bit.  (A complex-multiply formulation would lose this
    once the platform fuses multiply-adds.)
    """
    vw = basis_values(basis, w)
    vz = basis_values(basis, z)
    real = np.sum(vw.real * vz.real + vw.imag * vz.imag)
    imag = np.sum(vw.imag * vz.real - vw.real * vz.imag)
    return complex(real, imag)


def kernel_diag(basis: BasisTable, z) -> float:
    """On-diagonal kernel value sum_j |h_j(z)|^2."""
    v = basis_values(basis, z)
    return float(np.sum(v.real**2 + v.imag**2))


def kernel_deriv(basis: BasisTable, w, tangent: TangentData) -> complex:
    """Derivative section: the kernel differentiated along X in the
    conjugated second argument, evaluated at w.

    This is the holomorphic function h(w) = sum_j h_j(w) conj((Xh_j)(z)).
    """
    vw = basis_values(basis, w)
    dz = basis_deriv_values(basis, tangent)
    return complex(np.sum(vw * np.conj(dz)))


@dataclass(frozen=True)
class KernelGram:
    """Diagonal data of the pair {kernel section, derivative section} at (z, X).

    k = kernel diagonal value, g = mixed first-derivative value,
    s = second-order diagonal value.  These are the entries of the 2x2
    Hermitian Gram matrix [[k, conj(g)], [g, s]] of the two sections, and
    Cauchy-Schwarz gives k*s - |g|^2 >= 0.
    """

    k: float
    g: complex
    s: float

    def __post_init__(self):
        if not (self.k > 0.0):
            raise ValueError(f"kernel diagonal must be positive, got {self.k}")
        if self.s < 0.0:
            raise ValueError(f"second-order diagonal must be >= 0, got {self.s}")

    @property
    def schwarz_slack(self) -> float:
        """k*s - |g|^2; nonnegative, strictly positive for X != 0, D >= 1."""
        return self.k * self.s - abs(self.g) ** 2

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.k, np.conj(self.g)], [self.g, self.s]], dtype=np.complex128)


def kernel_gram(basis: BasisTable, tangent: TangentData) -> KernelGram:
    """Compute (k, g, s) from the truncated series at the tangent data."""
    v = basis_values(basis, tangent.z)
    d = basis_deriv_values(basis, tangent)
    k = float(np.sum(v.real**2 + v.imag**2))
    g = complex(np.sum(v * np.conj(d)))
    s = float(np.sum(d.real**2 + d.imag**2))
    return KernelGram(k=k, g=g, s=s)


# ---------------------------------------------------------------------------
# in-span functions
# ---------------------------------------------------------------------------


def eval_in_span(basis: BasisTable, coeffs: np.ndarray, z) -> complex:
    """Value at z of the function with the given basis coefficients."""
    return complex(np.dot(np.asarray(coeffs, dtype=np.complex128), basis_values(basis, z)))


def deriv_in_span(basis: BasisTable, coeffs: np.ndarray, tangent: TangentData) -> complex:
    """Directional derivative at z of an in-span function."""
    return complex(
        np.dot(np.asarray(coeffs, dtype=np.complex128), basis_deriv_values(basis, tangent))
    )


def eval_in_span_batch(basis: BasisTable, coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Vectorized in-span evaluation over an (m, n) point array."""
    weights = np.asarray(coeffs, dtype=np.complex128) * basis.normalizers
    return accel.weighted_monomial_sum(points, basis.exponents, weights)


def kernel_at_points(basis: BasisTable, points: np.ndarray, z) -> np.ndarray:
    """kernel(p_i, z) for all sample points p_i at once."""
    return eval_in_span_batch(basis, np.conj(basis_values(basis, z)), points)


def kernel_deriv_at_points(
    basis: BasisTable, points: np.ndarray, tangent: TangentData
) -> np.ndarray:
    """Derivative section evaluated at all sample points at once."""
    return eval_in_span_batch(basis, np.conj(basis_deriv_values(basis, tangent)), points)


# ---------------------------------------------------------------------------
# reproducing-formula residuals (Monte Carlo layer)
# ---------------------------------------------------------------------------


def _mc_integral(domain: DomainSpec, values: np.ndarray) -> complex:
    return volume(domain) * complex(np.mean(values))


def reproducing_residual(
    basis: BasisTable, coeffs: np.ndarray, z, samples: SampleSet
) -> float:
    """|MC integral of f * conj(kernel(., z)) - f(z)| for in-span f.

    The residual decays at the Monte Carlo rate in the sample count; the
    coefficient-space identity is exact and tested separately.
    """
    z = np.asarray(z, dtype=np.complex128)
    if gauge(basis.domain, z) >= 1.0:
        raise ValueError("evaluation point must lie inside the domain")
    fvals = eval_in_span_batch(basis, coeffs, samples.points)
    kvals = kernel_at_points(basis, samples.points, z)
    estimate = _mc_integral(basis.domain, fvals * np.conj(kvals))
    return abs(estimate - eval_in_span(basis, coeffs, z))


def reproducing_deriv_residual(
    basis: BasisTable, coeffs: np.ndarray, tangent: TangentData, samples: SampleSet
) -> float:
    """|MC integral of f * conj(derivative section) - (Xf)(z)| for in-span f."""
    if gauge(basis.domain, tangent.z) >= 1.0:
        raise ValueError("evaluation point must lie inside the domain")
    fvals = eval_in_span_batch(basis, coeffs, samples.points)
    hvals = kernel_deriv_at_points(basis, samples.points, tangent)
    estimate = _mc_integral(basis.domain, fvals * np.conj(hvals))
    return abs(estimate - deriv_in_span(basis, coeffs, tangent))


def mc_standard_error(domain: DomainSpec, values: np.ndarray) -> float:
    """Standard error of the MC integral estimate for the given integrand values."""
    n = values.shape[0]
    var = np.var(values.real) + np.var(values.imag)
    return float(volume(domain) * np.sqrt(var / n))
