"""Bergman and Caratheodory metrics on model domains in C^n.

Computes truncated Bergman kernels on polydiscs, balls and egg domains,
evaluates the Bergman metric by two independent routes, produces
Caratheodory values with explicit certificates, and verifies the equality

    B(z;X) = C(z;X) / || P(b_z * c) ||

between the two metrics through the two-dimensional complement projection P.
"""

from .accel import backend
from .bergman import (
    BasisTable,
    KernelGram,
    TangentData,
    basis_deriv_values,
    basis_values,
    build_basis,
    deriv_in_span,
    eval_in_span,
    eval_in_span_batch,
    graded_multi_indices,
    kernel,
    kernel_at_points,
    kernel_deriv,
    kernel_deriv_at_points,
    kernel_diag,
    kernel_gram,
    mc_standard_error,
    reproducing_deriv_residual,
    reproducing_residual,
    tangent,
)
from .domains import (
    DomainSpec,
    MultiIndex,
    SampleSet,
    ball,
    contains,
    domain_from_dict,
    domain_from_json,
    domain_hash,
    domain_to_dict,
    egg,
    gauge,
    gauge_batch,
    monomial_norm_sq,
    polydisc,
    sample_boundary,
    sample_interior,
    unit_ball,
    unit_bidisc,
    unit_disc,
    unit_polydisc,
    volume,
)
from .errors import (
    BcmetricsError,
    ConfigError,
    DegenerateGramError,
    DegreeCapError,
    MinimaxError,
    QuadratureError,
    RejectionEfficiencyError,
    UnsupportedDomainError,
    VerdictInconsistencyError,
)
from .metrics import (
    MODE_EXACT,
    MODE_MINIMAX,
    BallAutomorphism,
    CaraResult,
    ExtremalResult,
    bergman_maximizer,
    bergman_metric_hessian,
    caratheodory_exact,
    caratheodory_minimax,
    lu_gap,
    minimal_interpolant,
)
from .polynomials import Poly, geometric_expansion
from .projection import (
    VERDICT_EQUALITY,
    VERDICT_STRICT,
    ComplementFrame,
    EqualityReport,
    complement_frame,
    kernel_section_poly,
    normalize_certificate_phase,
    project_onto_frame,
    projection_norm_from_point_data,
    report_to_dict,
    report_to_json,
    strictness_verdict,
    verify_equality,
)

__version__ = "0.1.0"
