"""Two-dimensional complement frames, projections, and equality reports.

For a base point z and direction X, the subspace of in-span functions with
f(z) = 0 and (Xf)(z) = 0 has a two-dimensional orthogonal complement
spanned by the kernel section and the derivative kernel section.  This
module builds an orthonormal frame {h0, h1} of that complement, projects
in-span functions onto it, and verifies the central equality

    B(z;X) = C(z;X) / ||P(b_z * c)||

where b_z is the normalized kernel section and c a Caratheodory
certificate, together with the stronger coefficient identity

    (C/B) * b_max = P(b_z * c)

with b_max the unit Bergman maximizer.  Both identities are checked in
coefficient space; no quadrature is involved.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .bergman import (
    BasisTable,
    KernelGram,
    TangentData,
    basis_deriv_values,
    basis_values,
    deriv_in_span,
    eval_in_span,
    kernel_gram,
)
from .domains import domain_hash, domain_to_dict
from .errors import DegenerateGramError, DegreeCapError, VerdictInconsistencyError
from .metrics import CaraResult, MODE_MINIMAX, bergman_maximizer, bergman_metric_hessian
from .polynomials import Poly

VERDICT_EQUALITY = "equality-holds-with-this-certificate"
VERDICT_STRICT = "strict-inequality-in-hahn-bound"

REPORT_SCHEMA = 1

# A strictness verdict is only meaningful above the measured representation
# error: the beyond-cap tail of the product enters the Hahn distance even
# when the untruncated objects coincide, so the effective threshold is
# raised to a small multiple of it.
_TAIL_SAFETY = 4.0


def _strict_threshold(tolerance: float, truncation_tail: float) -> float:
    return max(tolerance, _TAIL_SAFETY * truncation_tail)


@dataclass(frozen=True)
class ComplementFrame:
    """Orthonormal frame {h0, h1} of the complement of the vanishing subspace.

    h0 is the normalized kernel section (h0(z) = sqrt(k) != 0), h1 the
    normalized component of the derivative section orthogonal to h0
    (h1(z) = 0, (Xh1)(z) real positive).
    """

    h0: np.ndarray
    h1: np.ndarray
    gram: KernelGram

    def __post_init__(self):
        self.h0.setflags(write=False)
        self.h1.setflags(write=False)


def complement_frame(basis: BasisTable, tangent: TangentData) -> ComplementFrame:
    """Gram-Schmidt on {kernel section, derivative section} at (z, X).

    Uses the exact pairwise inner products (k, g, s); raises if the pair is
    numerically rank deficient, i.e. the complement fails to be
    two-dimensional under the current truncation.
    """
    gram = kernel_gram(basis, tangent)
    values = basis_values(basis, tangent.z)
    derivs = basis_deriv_values(basis, tangent)
    sqrt_k = np.sqrt(gram.k)
    h0 = np.conj(values) / sqrt_k
    slack = gram.s - abs(gram.g) ** 2 / gram.k
    if gram.s <= 0.0 or slack <= 0.0:
        raise DegenerateGramError(
            f"complement is not two-dimensional at degree_cap={basis.degree_cap}: "
            f"orthogonal residual {slack!r}; increase the degree cap or use X != 0"
        )
    h1 = (np.conj(derivs) - (gram.g / sqrt_k) * h0) / np.sqrt(slack)
    return ComplementFrame(h0=h0, h1=h1, gram=gram)


def project_onto_frame(
    frame: ComplementFrame, coeffs: np.ndarray
) -> tuple[np.ndarray, float]:
    """Orthogonal projection of an in-span coefficient vector onto the frame."""
    f = np.asarray(coeffs, dtype=np.complex128)
    a0 = complex(np.vdot(frame.h0, f))
    a1 = complex(np.vdot(frame.h1, f))
    projected = a0 * frame.h0 + a1 * frame.h1
    return projected, float(np.hypot(abs(a0), abs(a1)))


def projection_norm_from_point_data(
    gram: KernelGram, value: complex, deriv: complex
) -> float:
    """Projection norm via the 2x2 Gram system on point data (f(z), Xf(z)).

    The reproducing identities convert both section inner products to point
    evaluations v = (f(z), (Xf)(z)), and with G_ij = <u_i, u_j> the squared
    projection norm is the quadratic form v . G^{-1} conj(v).  This is the
    cross-check route for project_onto_frame.
    """
    v = np.array([value, deriv], dtype=np.complex128)
    y = np.linalg.solve(gram.matrix, np.conj(v))
    norm_sq = float(np.dot(v, y).real)
    return np.sqrt(max(norm_sq, 0.0))


# ---------------------------------------------------------------------------
# equality report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EqualityReport:
    """All quantities entering the Bergman-Caratheodory equality at (z, X)."""

    bergman: float  # B(z;X) by the log-Hessian route
    caratheodory: float  # C(z;X) or its minimax lower bound
    norm_product: float  # || b_z * c ||, exact over the extended monomial set
    norm_projected: float  # || P(b_z * c) ||
    residual_equality: float  # | B - C / norm_projected |
    residual_projection: float  # || (C/B) b_max - P(b_z * c) ||
    strict_gap: float  # B - C / norm_product (the Hahn-bound gap)
    hahn_distance: float  # || (C/B) b_max - b_z * c ||
    verdict: str  # VERDICT_EQUALITY | VERDICT_STRICT
    mode: str  # certificate mode (exact or minimax lower bound)
    conditional: bool  # True when the certificate is only a lower bound
    truncation_tail: float  # norm of the product part beyond the degree cap
    certificate_sup: float  # boundary sup estimate of the certificate
    tolerance: float
    degree_cap: int
    z: tuple[complex, ...]
    X: tuple[complex, ...]
    projected_coeffs: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        self.projected_coeffs.setflags(write=False)


def _poly_from_basis_coeffs(basis: BasisTable, coeffs: np.ndarray) -> Poly:
    out: dict[tuple[int, ...], complex] = {}
    for j in range(basis.size):
        c = coeffs[j] * basis.normalizers[j]
        if c != 0:
            out[tuple(int(e) for e in basis.exponents[j])] = complex(c)
    return Poly(basis.dimension, out)


def _basis_coeffs_from_poly(basis: BasisTable, poly: Poly) -> np.ndarray:
    index = {tuple(int(e) for e in basis.exponents[j]): j for j in range(basis.size)}
    coeffs = np.zeros(basis.size, dtype=np.complex128)
    for alpha, c in poly.coeffs.items():
        coeffs[index[alpha]] = c * np.sqrt(basis.norms_sq[index[alpha]])
    return coeffs


def kernel_section_poly(basis: BasisTable, z) -> Poly:
    """The normalized kernel section b_z as a monomial polynomial."""
    values = basis_values(basis, z)
    sqrt_k = np.sqrt(float(np.sum(values.real**2 + values.imag**2)))
    return _poly_from_basis_coeffs(basis, np.conj(values) / sqrt_k)


def normalize_certificate_phase(cert: Poly, tangent: TangentData) -> Poly:
    """Rotate a certificate so its derivative along X at z is real positive.

    Resolves the phase non-uniqueness of maximizer certificates for
    reporting; distinct phase-rotated certificates become identical.
    """
    dval = cert.directional_derivative(tangent.z, tangent.X)
    if abs(dval) == 0.0:
        raise ValueError("certificate has zero derivative along X at z")
    return cert.scale(np.conj(dval) / abs(dval))


def verify_equality(
    basis: BasisTable,
    tangent: TangentData,
    cara: CaraResult,
    tolerance: float | None = None,
) -> EqualityReport:
    """Assemble the full equality report for one tangent datum.

    The product b_z * c is formed by exact coefficient convolution; its norm
    uses exact monomial norms over the full (possibly beyond-cap) exponent
    set, while the projection sees the in-span part, whose beyond-cap
    remainder is reported as ``truncation_tail``.

    Default tolerance is 1e-9 for center scenarios (exact under truncation)
    and 1e-6 otherwise, where kernel truncation enters.
    """
    domain = basis.domain
    if np.all(tangent.X == 0):
        raise ValueError("direction X must be nonzero for an equality report")
    cert = normalize_certificate_phase(cara.certificate, tangent)
    if abs(cert(tangent.z)) > 1e-10:
        raise ValueError(f"certificate does not vanish at z: {cert(tangent.z)!r}")
    if cert.degree > basis.degree_cap:
        raise DegreeCapError(
            f"certificate degree {cert.degree} exceeds degree_cap "
            f"{basis.degree_cap}; rebuild the basis with degree_cap >= {cert.degree}"
        )
    if tolerance is None:
        tolerance = 1e-9 if not np.any(tangent.z) else 1e-6

    bergman = bergman_metric_hessian(basis, tangent)
    cara_value = cara.value

    product = kernel_section_poly(basis, tangent.z) * cert
    in_span, tail = product.truncated(basis.degree_cap)
    norm_product = product.norm(domain)
    truncation_tail = tail.norm(domain)

    frame = complement_frame(basis, tangent)
    f_in = _basis_coeffs_from_poly(basis, in_span)
    projected, norm_projected = project_onto_frame(frame, f_in)

    cross = projection_norm_from_point_data(
        frame.gram,
        eval_in_span(basis, f_in, tangent.z),
        deriv_in_span(basis, f_in, tangent),
    )
    if abs(cross - norm_projected) > 1e-10 * max(1.0, norm_projected):
        raise DegenerateGramError(
            f"projection-norm routes disagree: frame {norm_projected!r} "
            f"vs point-data {cross!r}"
        )
    if norm_projected > norm_product + 1e-10:
        raise DegenerateGramError(
            f"projection expanded the norm: {norm_projected!r} > {norm_product!r}"
        )

    maximizer = bergman_maximizer(basis, tangent)
    residual_projection = float(
        np.linalg.norm((cara_value / bergman) * maximizer - projected)
    )
    residual_equality = abs(bergman - cara_value / norm_projected)
    strict_gap = bergman - cara_value / norm_product
    # distance from (C/B) b_max to the full product, computed directly in
    # coefficient space (the within-cap difference and the beyond-cap tail
    # are orthogonal); the norm_product/norm_projected difference would lose
    # half the significant digits near the equality case
    hahn_distance = float(
        np.sqrt(
            np.linalg.norm((cara_value / bergman) * maximizer - f_in) ** 2
            + truncation_tail**2
        )
    )
    threshold = _strict_threshold(tolerance, float(truncation_tail))
    verdict = VERDICT_STRICT if hahn_distance > threshold else VERDICT_EQUALITY

    return EqualityReport(
        bergman=float(bergman),
        caratheodory=float(cara_value),
        norm_product=float(norm_product),
        norm_projected=float(norm_projected),
        residual_equality=float(residual_equality),
        residual_projection=float(residual_projection),
        strict_gap=float(strict_gap),
        hahn_distance=hahn_distance,
        verdict=verdict,
        mode=cara.mode,
        conditional=cara.mode == MODE_MINIMAX,
        truncation_tail=float(truncation_tail),
        certificate_sup=float(cara.sup_estimate),
        tolerance=float(tolerance),
        degree_cap=basis.degree_cap,
        z=tuple(complex(v) for v in tangent.z),
        X=tuple(complex(v) for v in tangent.X),
        projected_coeffs=projected,
    )


def strictness_verdict(report: EqualityReport, tolerance: float) -> str:
    """Re-derive the strictness verdict at an explicit tolerance.

    Strict inequality in the Hahn bound holds iff (C/B) b_max differs from
    b_z * c in L^2 by more than the tolerance (raised to the measured
    truncation tail when that dominates).  A strict verdict must come with a
    positive Hahn-bound gap and vice versa; disagreement signals a numerical
    or logical fault and raises.
    """
    threshold = _strict_threshold(tolerance, report.truncation_tail)
    strict = report.hahn_distance > threshold
    gap_positive = report.strict_gap > threshold
    if strict != gap_positive:
        raise VerdictInconsistencyError(
            f"hahn distance {report.hahn_distance!r} and gap "
            f"{report.strict_gap!r} disagree at threshold {threshold!r}"
        )
    return VERDICT_STRICT if strict else VERDICT_EQUALITY


def report_to_dict(
    report: EqualityReport,
    basis: BasisTable,
    seeds: list[int] | None = None,
    tolerances: dict[str, float] | None = None,
) -> dict:
    """JSON-ready report with provenance (schema, domain hash, seeds)."""
    return {
        "schema": REPORT_SCHEMA,
        "domain": domain_to_dict(basis.domain),
        "domain_hash": domain_hash(basis.domain),
        "degree_cap": report.degree_cap,
        "z": [[v.real, v.imag] for v in report.z],
        "X": [[v.real, v.imag] for v in report.X],
        "bergman": report.bergman,
        "caratheodory": report.caratheodory,
        "norm_product": report.norm_product,
        "norm_projected": report.norm_projected,
        "residual_equality": report.residual_equality,
        "residual_projection": report.residual_projection,
        "strict_gap": report.strict_gap,
        "hahn_distance": report.hahn_distance,
        "verdict": report.verdict,
        "mode": report.mode,
        "conditional": report.conditional,
        "truncation_tail": report.truncation_tail,
        "certificate_sup": report.certificate_sup,
        "tolerance": report.tolerance,
        "seeds": list(seeds or []),
        "tolerances": dict(tolerances or {}),
    }


def report_to_json(
    report: EqualityReport,
    basis: BasisTable,
    seeds: list[int] | None = None,
    tolerances: dict[str, float] | None = None,
) -> str:
    return json.dumps(
        report_to_dict(report, basis, seeds=seeds, tolerances=tolerances),
        sort_keys=True,
        indent=2,
    )
