"""Bergman and Caratheodory metrics on the model domains.

The Bergman metric is computed by two independent routes:

* the log-Hessian of the kernel diagonal,
      B(z;X)^2 = s/k - |g|^2/k^2
  with (k, g, s) the kernel Gram data, and
* the least-norm interpolation problem
      m(z;X) = min { ||f|| : f(z) = 0, (Xf)(z) = 1 }
  whose optimal norm satisfies m = 1/(sqrt(k) * B).

The Caratheodory metric has closed forms on polydiscs (coordinatewise
Schwarz-Pick) and balls (unitary-invariant length, transported from the
center by automorphisms); on other domains only the sampled minimax lower
bound is offered.  Every Caratheodory result carries an explicit
certificate polynomial normalized so its derivative along X at z is real
and positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bergman import (
    BasisTable,
    TangentData,
    basis_deriv_values,
    basis_values,
    deriv_in_span,
    eval_in_span,
    graded_multi_indices,
    kernel_gram,
)
from .domains import DomainSpec, SampleSet, gauge, sample_boundary
from .errors import DegenerateGramError, UnsupportedDomainError
from .minimax import solve_modulus_minimax
from .polynomials import Poly, geometric_expansion

#: modes reported by Caratheodory computations
MODE_EXACT = "exact-closed-form"
MODE_MINIMAX = "minimax-lower-bound"

_DEFAULT_TRANSPORT_DEGREE = 24
_DEFAULT_SUP_SAMPLES = 512
_DEFAULT_SUP_SEED = 20210


@dataclass(frozen=True)
class ExtremalResult:
    """Solution of the least-norm interpolation problem at (z, X)."""

    coefficients: np.ndarray  # basis coefficients of the minimizer
    norm: float  # its L^2 norm, = m(z;X)
    metric_value: float  # Bergman metric implied via m = 1/(sqrt(k) B)

    def __post_init__(self):
        self.coefficients.setflags(write=False)


@dataclass(frozen=True)
class CaraResult:
    """Caratheodory metric value (or lower bound) with its certificate."""

    value: float
    certificate: Poly
    mode: str  # MODE_EXACT | MODE_MINIMAX
    sup_estimate: float  # max modulus of the certificate over boundary samples


def _require_inside(domain: DomainSpec, z: np.ndarray):
    if gauge(domain, z) >= 1.0:
        raise ValueError(f"base point {z} is not inside the domain (gauge >= 1)")


# ---------------------------------------------------------------------------
# Bergman metric
# ---------------------------------------------------------------------------


def bergman_metric_hessian(basis: BasisTable, tangent: TangentData) -> float:
    """Bergman metric via the log-Hessian of the kernel diagonal."""
    _require_inside(basis.domain, tangent.z)
    if np.all(tangent.X == 0):
        return 0.0
    gram = kernel_gram(basis, tangent)
    variance = gram.s / gram.k - abs(gram.g) ** 2 / gram.k**2
    if variance <= 0.0:
        raise DegenerateGramError(
            f"kernel Gram is rank deficient at degree_cap={basis.degree_cap}: "
            f"log-Hessian value {variance!r} is not positive; increase the degree cap"
        )
    return float(np.sqrt(variance))


def minimal_interpolant(basis: BasisTable, tangent: TangentData) -> ExtremalResult:
    """Least-norm f with f(z) = 0 and (Xf)(z) = 1, in coefficient space.

    The closed-form solution is c = A^H G^{-1} (0, 1) where A stacks the two
    constraint functionals and G = A A^H is the 2x2 kernel Gram.
    """
    _require_inside(basis.domain, tangent.z)
    if np.all(tangent.X == 0):
        raise ValueError("direction X must be nonzero for the interpolation problem")
    values = basis_values(basis, tangent.z)
    derivs = basis_deriv_values(basis, tangent)
    k = float(np.sum(values.real**2 + values.imag**2))
    g = complex(np.sum(values * np.conj(derivs)))
    s = float(np.sum(derivs.real**2 + derivs.imag**2))
    det = k * s - abs(g) ** 2
    if det <= 0.0:
        raise DegenerateGramError(
            f"constraint functionals are linearly dependent at degree_cap="
            f"{basis.degree_cap} (Gram determinant {det!r}); increase the degree cap"
        )
    gram = np.array([[k, g], [np.conj(g), s]], dtype=np.complex128)
    multipliers = np.linalg.solve(gram, np.array([0.0, 1.0], dtype=np.complex128))
    coeffs = np.conj(values) * multipliers[0] + np.conj(derivs) * multipliers[1]
    norm = float(np.linalg.norm(coeffs))

    value_residual = abs(eval_in_span(basis, coeffs, tangent.z))
    deriv_residual = abs(deriv_in_span(basis, coeffs, tangent) - 1.0)
    if value_residual > 1e-10 or deriv_residual > 1e-10:
        raise DegenerateGramError(
            f"interpolation constraints violated: |f(z)| = {value_residual:.3e}, "
            f"|Xf(z) - 1| = {deriv_residual:.3e}"
        )
    metric = 1.0 / (np.sqrt(k) * norm)
    hessian = bergman_metric_hessian(basis, tangent)
    if abs(metric - hessian) > 1e-9 * hessian:
        raise DegenerateGramError(
            f"interpolation route disagrees with log-Hessian route: "
            f"{metric!r} vs {hessian!r}"
        )
    return ExtremalResult(coefficients=coeffs, norm=norm, metric_value=float(metric))


def bergman_maximizer(basis: BasisTable, tangent: TangentData) -> np.ndarray:
    """Unit-norm extremal function for the Bergman metric at (z, X).

    Rescales the minimal interpolant to unit norm; its derivative along X
    at z equals sqrt(k) * B(z;X) and is real positive by construction.
    """
    result = minimal_interpolant(basis, tangent)
    coeffs = result.coefficients / result.norm
    k = kernel_gram(basis, tangent).k
    target = np.sqrt(k) * result.metric_value
    realized = deriv_in_span(basis, coeffs, tangent)
    if abs(realized - target) > 1e-9 * max(1.0, abs(target)):
        raise DegenerateGramError(
            f"maximizer normalization failed: X-derivative {realized!r} "
            f"vs sqrt(k)*B = {target!r}"
        )
    return coeffs


# ---------------------------------------------------------------------------
# Caratheodory metric: closed forms
# ---------------------------------------------------------------------------


class BallAutomorphism:
    """The involutive unit-ball automorphism exchanging 0 and the point a."""

    def __init__(self, a):
        a = np.asarray(a, dtype=np.complex128)
        if np.linalg.norm(a) >= 1.0:
            raise ValueError("automorphism parameter must lie in the open unit ball")
        self.a = a
        self.norm_a_sq = float(np.vdot(a, a).real)
        self.s = float(np.sqrt(1.0 - self.norm_a_sq))

    def _split(self, h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        # component along a and orthogonal remainder
        if self.norm_a_sq == 0.0:
            return np.zeros_like(h), h
        proj = (np.vdot(self.a, h) / self.norm_a_sq) * self.a
        return proj, h - proj

    def __call__(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=np.complex128)
        proj, orth = self._split(w)
        denom = 1.0 - np.vdot(self.a, w)
        return (self.a - proj - self.s * orth) / denom

    def jacobian_apply(self, w, h) -> np.ndarray:
        """Complex Jacobian at w applied to the direction h."""
        w = np.asarray(w, dtype=np.complex128)
        h = np.asarray(h, dtype=np.complex128)
        proj_h, orth_h = self._split(h)
        denom = 1.0 - np.vdot(self.a, w)
        numerator = -(proj_h + self.s * orth_h) * denom + self(w) * denom * np.vdot(self.a, h)
        return numerator / denom**2


def _phase_to_positive(value: complex) -> complex:
    """Unimodular factor turning value into |value| (1.0 for value = 0)."""
    mag = abs(value)
    return np.conj(value) / mag if mag > 0 else 1.0 + 0.0j


def _polydisc_certificate(
    domain: DomainSpec, tangent: TangentData, j: int, truncate_degree: int
) -> Poly:
    """Coordinate Moebius certificate, Taylor-truncated when z_j != 0."""
    n = domain.dimension
    r = domain.polyradii[j]
    a = tangent.z[j] / r
    unit = [0] * n
    unit[j] = 1
    w = Poly.monomial(tuple(unit), 1.0 / r)  # w = zeta_j / r_j
    lam = _phase_to_positive(tangent.X[j])
    if a == 0:
        return w.scale(lam)
    numerator = w - Poly.constant(n, a)
    series = geometric_expansion(w.scale(np.conj(a)), truncate_degree)
    cert, _ = (numerator * series).truncated(truncate_degree)
    return cert.scale(lam)


def _ball_certificate(
    domain: DomainSpec, tangent: TangentData, truncate_degree: int
) -> tuple[float, Poly]:
    """Value and certificate on a ball, by automorphism transport from 0."""
    n = domain.dimension
    r = domain.radius
    a = tangent.z / r
    v = tangent.X / r
    norm_a = np.linalg.norm(a)
    if norm_a == 0.0:
        value = float(np.linalg.norm(v))
        coeff = np.conj(v) / (value * r)
        cert = Poly.zero(n)
        for j in range(n):
            unit = [0] * n
            unit[j] = 1
            cert = cert + Poly.monomial(tuple(unit), coeff[j])
        return value, cert
    moebius = BallAutomorphism(a)
    y = moebius.jacobian_apply(a, v)
    value = float(np.linalg.norm(y))
    # numerator and denominator of <moebius(w), y>, both affine in w
    a_dot_y = complex(np.vdot(y, a))  # sum a_j conj(y_j)
    linear_l = Poly.zero(n)  # L(w) = sum conj(a_j) w_j
    linear_y = Poly.zero(n)  # sum conj(y_j) w_j
    for j in range(n):
        unit = [0] * n
        unit[j] = 1
        linear_l = linear_l + Poly.monomial(tuple(unit), np.conj(a[j]))
        linear_y = linear_y + Poly.monomial(tuple(unit), np.conj(y[j]))
    numerator = (
        Poly.constant(n, a_dot_y)
        + linear_l.scale(-a_dot_y * (1.0 - moebius.s) / moebius.norm_a_sq)
        + linear_y.scale(-moebius.s)
    )
    series = geometric_expansion(linear_l, truncate_degree)
    cert_unit, _ = (numerator * series).truncated(truncate_degree)
    cert_unit = cert_unit.scale(1.0 / value)
    # compose with zeta -> zeta / r: scale each degree-m coefficient by r^-m
    cert = Poly(
        n, {alpha: c * r ** (-sum(alpha)) for alpha, c in cert_unit.coeffs.items()}
    )
    return value, cert


def _certificate_checks(
    domain: DomainSpec,
    tangent: TangentData,
    cert: Poly,
    boundary: SampleSet | None,
) -> float:
    if abs(cert(tangent.z)) > 1e-10:
        raise ValueError(f"certificate does not vanish at z: {cert(tangent.z)!r}")
    if boundary is None:
        boundary = sample_boundary(domain, _DEFAULT_SUP_SAMPLES, _DEFAULT_SUP_SEED)
    if not cert.coeffs:
        return 0.0
    return float(np.max(np.abs(cert.eval_at_points(boundary.points))))


def caratheodory_exact(
    domain: DomainSpec,
    tangent: TangentData,
    truncate_degree: int | None = None,
    boundary: SampleSet | None = None,
) -> CaraResult:
    """Exact Caratheodory metric on polydiscs and balls.

    On a polydisc the value is the largest coordinatewise Schwarz-Pick
    length r_j |X_j| / (r_j^2 - |z_j|^2); on a ball it is the length of the
    direction transported to the center by the standard automorphism.  Away
    from the center the certificate is a rational function and is returned
    Taylor-truncated at ``truncate_degree``; the induced error shows up in
    ``sup_estimate`` rather than being hidden.
    """
    _require_inside(domain, tangent.z)
    if domain.dimension != tangent.dimension:
        raise ValueError("tangent dimension does not match the domain")
    degree = _DEFAULT_TRANSPORT_DEGREE if truncate_degree is None else truncate_degree
    if np.all(tangent.X == 0):
        cert = Poly.zero(domain.dimension)
        return CaraResult(value=0.0, certificate=cert, mode=MODE_EXACT, sup_estimate=0.0)
    if domain.kind == "polydisc":
        radii = np.asarray(domain.polyradii)
        lengths = radii * np.abs(tangent.X) / (radii**2 - np.abs(tangent.z) ** 2)
        j = int(np.argmax(lengths))  # ties resolve to the smallest index
        value = float(lengths[j])
        cert = _polydisc_certificate(domain, tangent, j, degree)
    elif domain.kind == "ball":
        value, cert = _ball_certificate(domain, tangent, degree)
    else:
        raise UnsupportedDomainError(
            f"no exact Caratheodory closed form for kind {domain.kind!r}; "
            "use caratheodory_minimax"
        )
    # absorb the Taylor residue at z into the constant term so the
    # certificate vanishes at z exactly; the shift is part of the measured
    # sup estimate like every other truncation effect
    residue = cert(tangent.z)
    if residue != 0:
        cert = cert + Poly.constant(domain.dimension, -residue)
    sup = _certificate_checks(domain, tangent, cert, boundary)
    return CaraResult(value=value, certificate=cert, mode=MODE_EXACT, sup_estimate=sup)


def caratheodory_minimax(
    domain: DomainSpec,
    tangent: TangentData,
    degree: int,
    boundary: SampleSet,
    initial_halfplanes: int = 32,
    refine_tol: float = 1e-8,
) -> CaraResult:
    """Sampled minimax lower bound for the Caratheodory metric.

    Minimizes the maximum modulus over the boundary samples among degree-d
    polynomials p with p(z) = 0 and (Xp)(z) = 1, then reports 1/M with the
    rescaled polynomial as certificate.  The result is a lower bound for
    the metric up to boundary sampling error and is labelled as such.
    """
    _require_inside(domain, tangent.z)
    if degree < 1:
        raise ValueError("polynomial degree must be >= 1 (degree 0 is infeasible)")
    if len(boundary) == 0:
        raise ValueError("boundary sample set is empty")
    if np.all(tangent.X == 0):
        raise ValueError("direction X must be nonzero")
    exps = np.array(graded_multi_indices(domain.dimension, degree), dtype=np.int64)
    solution = solve_modulus_minimax(
        boundary.points,
        exps,
        tangent.z,
        tangent.X,
        initial_halfplanes=initial_halfplanes,
        refine_tol=refine_tol,
    )
    scaled = solution.coeffs / solution.bound
    cert = Poly(
        domain.dimension,
        {
            tuple(int(e) for e in exps[j]): complex(scaled[j])
            for j in range(exps.shape[0])
            if scaled[j] != 0
        },
    )
    sup = _certificate_checks(domain, tangent, cert, boundary)
    if sup > 1.0 + 1e-8:
        raise ValueError(f"minimax certificate exceeds the unit bound: sup {sup!r}")
    return CaraResult(
        value=1.0 / solution.bound,
        certificate=cert,
        mode=MODE_MINIMAX,
        sup_estimate=sup,
    )


def lu_gap(basis: BasisTable, tangent: TangentData, cara: CaraResult) -> float:
    """Signed gap B - C; nonnegative, strictly positive for X != 0."""
    return bergman_metric_hessian(basis, tangent) - cara.value
