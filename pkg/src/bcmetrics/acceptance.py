"""The acceptance suite: every shipping criterion as a checkable record.

Each criterion function returns an AcceptanceRecord with the measured
quantities and a pass flag; ``run_all`` executes the whole battery with
fixed seeds and returns the records plus the elapsed wall time.  The CLI
``acceptance`` subcommand prints the table; the pytest suite asserts each
record individually.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .bergman import (
    basis_deriv_values,
    basis_values,
    build_basis,
    deriv_in_span,
    eval_in_span,
    eval_in_span_batch,
    kernel_at_points,
    kernel_diag,
    mc_standard_error,
    tangent,
)
from .domains import (
    DomainSpec,
    egg,
    gauge,
    gauge_batch,
    sample_boundary,
    sample_interior,
    unit_ball,
    unit_bidisc,
    unit_disc,
    volume,
)
from .metrics import (
    CaraResult,
    MODE_EXACT,
    bergman_metric_hessian,
    caratheodory_exact,
    caratheodory_minimax,
    minimal_interpolant,
)
from .projection import (
    VERDICT_EQUALITY,
    VERDICT_STRICT,
    _poly_from_basis_coeffs,
    complement_frame,
    project_onto_frame,
    projection_norm_from_point_data,
    verify_equality,
)
from .polynomials import Poly

RUNTIME_BUDGET_SECONDS = 300.0


@dataclass
class AcceptanceRecord:
    ident: int
    title: str
    passed: bool
    measured: dict = field(default_factory=dict)
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.ident}: {self.title}" + (
            f" ({self.detail})" if self.detail else ""
        )


def _random_unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal((n, 2))
    x = v[:, 0] + 1j * v[:, 1]
    return x / np.linalg.norm(x)


def _random_interior_points(
    rng: np.random.Generator, domain: DomainSpec, count: int, max_gauge: float
) -> np.ndarray:
    out = []
    radii = np.asarray(domain.bounding_radii)
    while len(out) < count:
        u = rng.random((256, domain.dimension))
        v = rng.random((256, domain.dimension))
        pts = radii * np.sqrt(u) * np.exp(2j * np.pi * v)
        keep = pts[gauge_batch(domain, pts) <= max_gauge]
        out.extend(keep[: count - len(out)])
    return np.array(out)


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


def criterion_1_ball_equality() -> AcceptanceRecord:
    """Unit ball in C^2 at the center: equality with B = sqrt(3), C = 1."""
    domain = unit_ball(2)
    basis = build_basis(domain, 8)
    rng = np.random.default_rng(101)
    worst: dict[str, float] = {
        "bergman_error": 0.0,
        "cara_error": 0.0,
        "norm_error": 0.0,
        "residual_equality": 0.0,
        "residual_projection": 0.0,
    }
    verdict_ok = True
    target_norm = 1.0 / np.sqrt(3.0)
    for _ in range(5):
        x = _random_unit_vector(rng, 2)
        t = tangent(np.zeros(2), x)
        cara = caratheodory_exact(domain, t)
        report = verify_equality(basis, t, cara)
        worst["bergman_error"] = max(worst["bergman_error"], abs(report.bergman - np.sqrt(3.0)))
        worst["cara_error"] = max(worst["cara_error"], abs(report.caratheodory - 1.0))
        worst["norm_error"] = max(
            worst["norm_error"],
            abs(report.norm_product - target_norm),
            abs(report.norm_projected - target_norm),
        )
        worst["residual_equality"] = max(worst["residual_equality"], report.residual_equality)
        worst["residual_projection"] = max(
            worst["residual_projection"], report.residual_projection
        )
        verdict_ok = verdict_ok and report.verdict == VERDICT_EQUALITY
    passed = (
        verdict_ok
        and worst["bergman_error"] < 1e-9
        and worst["cara_error"] < 1e-9
        and worst["norm_error"] < 1e-9
        and worst["residual_equality"] < 1e-9
        and worst["residual_projection"] < 1e-9
    )
    return AcceptanceRecord(
        1,
        "ball equality at the center (5 random unit directions)",
        passed,
        worst,
        f"max residual_equality {worst['residual_equality']:.2e}",
    )


def criterion_2_bidisc_strict() -> AcceptanceRecord:
    """Unit bidisc at the center with X = (sqrt(0.8), sqrt(0.2)): strict."""
    domain = unit_bidisc()
    basis = build_basis(domain, 8)
    t = tangent(np.zeros(2), np.array([np.sqrt(0.8), np.sqrt(0.2)]))
    cara = caratheodory_exact(domain, t)
    report = verify_equality(basis, t, cara)
    boundary = sample_boundary(domain, 512, seed=11)
    cara_mm = caratheodory_minimax(domain, t, degree=4, boundary=boundary)
    measured = {
        "bergman_error": abs(report.bergman - np.sqrt(2.0)),
        "cara_exact_error": abs(report.caratheodory - np.sqrt(0.8)),
        "cara_minimax_error": abs(cara_mm.value - np.sqrt(0.8)),
        "norm_product_error": abs(report.norm_product - 1.0 / np.sqrt(2.0)),
        "norm_projected_error": abs(report.norm_projected - np.sqrt(0.4)),
        "strict_gap_error": abs(report.strict_gap - (np.sqrt(2.0) - np.sqrt(1.6))),
        "residual_equality": report.residual_equality,
    }
    passed = (
        measured["bergman_error"] < 1e-9
        and measured["cara_exact_error"] < 1e-12
        and measured["cara_minimax_error"] < 1e-3
        and measured["norm_product_error"] < 1e-9
        and measured["norm_projected_error"] < 1e-9
        and measured["strict_gap_error"] < 1e-6
        and measured["residual_equality"] < 1e-9
        and report.verdict == VERDICT_STRICT
    )
    return AcceptanceRecord(
        2,
        "bidisc strict inequality at the center",
        passed,
        measured,
        f"strict gap {report.strict_gap:.6f}",
    )


def criterion_3_route_equivalence() -> AcceptanceRecord:
    """sqrt(k) * B * m = 1 on four domains, 20 random tangents each, D = 16."""
    rng = np.random.default_rng(301)
    worst = 0.0
    for domain in (unit_disc(), unit_bidisc(), unit_ball(2), egg((1.0, 2.0))):
        basis = build_basis(domain, 16)
        points = _random_interior_points(rng, domain, 20, max_gauge=0.6)
        for z in points:
            x = _random_unit_vector(rng, domain.dimension)
            t = tangent(z, x)
            k = kernel_diag(basis, z)
            bergman = bergman_metric_hessian(basis, t)
            interp = minimal_interpolant(basis, t)
            worst = max(worst, abs(np.sqrt(k) * bergman * interp.norm - 1.0))
    passed = worst < 1e-6
    return AcceptanceRecord(
        3,
        "route equivalence of log-Hessian and least-norm interpolation",
        passed,
        {"max_identity_error": worst},
        f"max |sqrt(k) B m - 1| = {worst:.2e}",
    )


def criterion_4_reproducing() -> AcceptanceRecord:
    """Reproducing formulas: exact in coefficient space, MC within 3 SE."""
    rng = np.random.default_rng(401)
    worst_coeff = 0.0
    mc_ok = True
    worst_mc_ratio = 0.0
    for domain in (unit_disc(), unit_bidisc(), unit_ball(2), egg((1.0, 2.0))):
        basis = build_basis(domain, 10)
        interior = _random_interior_points(rng, domain, 4, max_gauge=0.7)
        # coefficient-space identities: 50 random in-span functions;
        # the inner products against the section vectors must reproduce the
        # point value and derivative computed by plain monomial arithmetic
        for _ in range(50):
            coeffs = rng.standard_normal(basis.size) + 1j * rng.standard_normal(basis.size)
            z = interior[int(rng.integers(len(interior)))]
            x = _random_unit_vector(rng, domain.dimension)
            t = tangent(z, x)
            f_poly = _poly_from_basis_coeffs(basis, coeffs)
            section = np.conj(basis_values(basis, z))
            deriv_section = np.conj(basis_deriv_values(basis, t))
            inner0 = complex(np.vdot(section, coeffs))
            inner1 = complex(np.vdot(deriv_section, coeffs))
            value = f_poly(z)
            deriv = f_poly.directional_derivative(z, x)
            worst_coeff = max(worst_coeff, abs(inner0 - value) / max(1.0, abs(value)))
            worst_coeff = max(worst_coeff, abs(inner1 - deriv) / max(1.0, abs(deriv)))
        # Monte Carlo layer: 2 functions per domain at 1e5 samples
        samples = sample_interior(domain, 100_000, seed=402)
        for _ in range(2):
            coeffs = rng.standard_normal(basis.size) + 1j * rng.standard_normal(basis.size)
            coeffs /= np.linalg.norm(coeffs)
            z = interior[int(rng.integers(len(interior)))]
            t = tangent(z, _random_unit_vector(rng, domain.dimension))
            fvals = eval_in_span_batch(basis, coeffs, samples.points)
            kvals = kernel_at_points(basis, samples.points, z)
            integrand = fvals * np.conj(kvals)
            estimate = volume(domain) * complex(np.mean(integrand))
            se = mc_standard_error(domain, integrand)
            err = abs(estimate - eval_in_span(basis, coeffs, z))
            mc_ok = mc_ok and err < 3.0 * se
            worst_mc_ratio = max(worst_mc_ratio, err / se)
    passed = worst_coeff < 1e-12 and mc_ok
    return AcceptanceRecord(
        4,
        "reproducing formulas (coefficient space exact, MC within 3 SE)",
        passed,
        {"max_coeff_error": worst_coeff, "max_mc_error_over_se": worst_mc_ratio},
        f"coeff {worst_coeff:.2e}, MC err/SE {worst_mc_ratio:.2f}",
    )


def criterion_5_lu_inequality() -> AcceptanceRecord:
    """B > C at every tested tangent on domains with exact C."""
    rng = np.random.default_rng(501)
    min_gap = np.inf
    for domain in (unit_disc(), unit_bidisc(), unit_ball(2)):
        basis = build_basis(domain, 16)
        points = _random_interior_points(rng, domain, 12, max_gauge=0.6)
        for z in points:
            x = _random_unit_vector(rng, domain.dimension)
            t = tangent(z, x)
            cara = caratheodory_exact(domain, t)
            gap = bergman_metric_hessian(basis, t) - cara.value
            min_gap = min(min_gap, gap)
    passed = min_gap > 0.0
    return AcceptanceRecord(
        5,
        "Lu inequality B > C on all exact-C domains",
        passed,
        {"min_gap": float(min_gap)},
        f"min gap {min_gap:.6f}",
    )


def criterion_6_projection_algebra() -> AcceptanceRecord:
    """Idempotence, self-adjointness, contraction, route agreement < 1e-10."""
    rng = np.random.default_rng(601)
    worst = {"idempotence": 0.0, "self_adjoint": 0.0, "contraction": 0.0, "routes": 0.0}
    for domain in (unit_disc(), unit_bidisc(), unit_ball(2), egg((1.0, 2.0))):
        basis = build_basis(domain, 10)
        z = _random_interior_points(rng, domain, 1, max_gauge=0.5)[0]
        t = tangent(z, _random_unit_vector(rng, domain.dimension))
        frame = complement_frame(basis, t)
        for _ in range(100):
            f = rng.standard_normal(basis.size) + 1j * rng.standard_normal(basis.size)
            g = rng.standard_normal(basis.size) + 1j * rng.standard_normal(basis.size)
            pf, norm_pf = project_onto_frame(frame, f)
            ppf, _ = project_onto_frame(frame, pf)
            pg, _ = project_onto_frame(frame, g)
            worst["idempotence"] = max(worst["idempotence"], float(np.linalg.norm(ppf - pf)))
            worst["self_adjoint"] = max(
                worst["self_adjoint"], abs(complex(np.vdot(g, pf)) - complex(np.vdot(pg, f)))
            )
            worst["contraction"] = max(
                worst["contraction"], norm_pf - float(np.linalg.norm(f))
            )
            cross = projection_norm_from_point_data(
                frame.gram, eval_in_span(basis, f, z), deriv_in_span(basis, f, t)
            )
            worst["routes"] = max(
                worst["routes"], abs(cross - norm_pf) / max(1.0, norm_pf)
            )
    passed = all(v < 1e-10 for v in worst.values())
    return AcceptanceRecord(
        6,
        "projection operator algebra on 100 random functions per domain",
        passed,
        worst,
        f"max defect {max(worst.values()):.2e}",
    )


def criterion_7_kernel_closed_forms() -> AcceptanceRecord:
    """Truncated diagonal kernels match the disc and ball closed forms."""
    worst = 0.0
    basis_disc = build_basis(unit_disc(), 40)
    basis_ball = build_basis(unit_ball(2), 40)
    rng = np.random.default_rng(701)
    for radius in np.linspace(0.0, 0.7, 15):
        phase = np.exp(2j * np.pi * rng.random())
        z1 = np.array([radius * phase])
        t = radius**2
        worst = max(worst, abs(kernel_diag(basis_disc, z1) - 1.0 / (np.pi * (1 - t) ** 2)))
        direction = _random_unit_vector(rng, 2)
        z2 = radius * direction
        worst = max(
            worst, abs(kernel_diag(basis_ball, z2) - 2.0 / (np.pi**2 * (1 - t) ** 3))
        )
    passed = worst < 1e-8
    return AcceptanceRecord(
        7,
        "diagonal kernel closed forms on disc and ball (|z| <= 0.7, D = 40)",
        passed,
        {"max_abs_error": worst},
        f"max error {worst:.2e}",
    )


def criterion_8_certificate_independence() -> AcceptanceRecord:
    """Phase-distinct bidisc certificates project to the same function."""
    domain = unit_bidisc()
    basis = build_basis(domain, 8)
    t = tangent(np.zeros(2), np.array([np.sqrt(0.8), np.sqrt(0.2)]))
    value = float(np.sqrt(0.8))
    projections = []
    for phase in (1.0, np.exp(1.3j)):
        cert = Poly.monomial((1, 0), phase)
        cara = CaraResult(
            value=value, certificate=cert, mode=MODE_EXACT, sup_estimate=1.0
        )
        report = verify_equality(basis, t, cara)
        projections.append(report.projected_coeffs)
    diff = float(np.linalg.norm(projections[0] - projections[1]))
    passed = diff < 1e-9
    return AcceptanceRecord(
        8,
        "projection is independent of the certificate phase",
        passed,
        {"projection_difference": diff},
        f"difference {diff:.2e}",
    )


CRITERIA = [
    criterion_1_ball_equality,
    criterion_2_bidisc_strict,
    criterion_3_route_equivalence,
    criterion_4_reproducing,
    criterion_5_lu_inequality,
    criterion_6_projection_algebra,
    criterion_7_kernel_closed_forms,
    criterion_8_certificate_independence,
]


def run_all(verbose: bool = False) -> tuple[list[AcceptanceRecord], float]:
    """Run criteria 1-8, append the runtime criterion 9, return all records."""
    start = time.perf_counter()
    records = []
    for criterion in CRITERIA:
        record = criterion()
        records.append(record)
        if verbose:
            print(record.line(), flush=True)
    elapsed = time.perf_counter() - start
    runtime = AcceptanceRecord(
        9,
        "acceptance suite runtime budget",
        elapsed < RUNTIME_BUDGET_SECONDS,
        {"elapsed_seconds": elapsed, "budget_seconds": RUNTIME_BUDGET_SECONDS},
        f"{elapsed:.1f}s of {RUNTIME_BUDGET_SECONDS:.0f}s",
    )
    records.append(runtime)
    if verbose:
        print(runtime.line(), flush=True)
    return records, elapsed
