"""Model bounded Reinhardt domains and their monomial geometry.

Three domain families are supported, each given by a gauge function g with
the domain being {z : g(z) < 1}:

* polydisc with polyradii (r_1, ..., r_n):  g(z) = max_j |z_j| / r_j
* ball of radius r:                         g(z) = |z| / r
* egg with exponents (p_1, ..., p_n):       g(z) = sum_j |z_j|^(2 p_j)

All are complete Reinhardt domains, so the monomials z^alpha form an
orthogonal system in L^2 and the squared monomial norms

    ||z^alpha||^2 = integral over the domain of |z^alpha|^2 dV

(plain Lebesgue volume on R^(2n), no normalization) determine the
orthonormal basis used everywhere else in the package.
"""

from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import ConfigError, QuadratureError, RejectionEfficiencyError

# Relative tolerance requested from the nested adaptive quadrature, and the
# threshold at which a quadrature result is rejected as non-convergent.
QUAD_REL_TOL = 1e-12
QUAD_FAIL_TOL = 1e-9

# Gauge distance from 1 allowed for boundary samples.
BOUNDARY_TOL = 1e-12

_REJECTION_BATCH = 8192
_MIN_EFFICIENCY = 1e-3


@dataclass(frozen=True, order=True)
class MultiIndex:
    """Monomial exponent tuple alpha = (alpha_1, ..., alpha_n)."""

    exponents: tuple[int, ...]
    degree: int = field(init=False, compare=False)

    def __post_init__(self):
        if any(a < 0 or not isinstance(a, int) for a in self.exponents):
            raise ValueError(f"exponents must be non-negative integers: {self.exponents}")
        object.__setattr__(self, "degree", sum(self.exponents))

    def __len__(self):
        return len(self.exponents)


@dataclass(frozen=True)
class DomainSpec:
    """A model bounded domain in C^n.

    Exactly one of the kind-specific parameter tuples is meaningful:
    ``polyradii`` for kind "polydisc", ``radius`` for kind "ball",
    ``exponents`` for kind "egg".
    """

    kind: str
    dimension: int
    polyradii: tuple[float, ...] = ()
    radius: float = 0.0
    exponents: tuple[float, ...] = ()

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if self.kind == "polydisc":
            if len(self.polyradii) != self.dimension:
                raise ValueError("polydisc needs one polyradius per coordinate")
            if any(r <= 0 for r in self.polyradii):
                raise ValueError(f"polyradii must be positive: {self.polyradii}")
        elif self.kind == "ball":
            if self.radius <= 0:
                raise ValueError(f"ball radius must be positive: {self.radius}")
        elif self.kind == "egg":
            if len(self.exponents) != self.dimension:
                raise ValueError("egg needs one exponent per coordinate")
            if any(p < 1 for p in self.exponents):
                raise ValueError(f"egg exponents must be >= 1: {self.exponents}")
        else:
            raise ValueError(f"unknown domain kind: {self.kind!r}")

    @property
    def bounding_radii(self) -> tuple[float, ...]:
        """Radii of the smallest bounding polydisc."""
        if self.kind == "polydisc":
            return self.polyradii
        if self.kind == "ball":
            return (self.radius,) * self.dimension
        return (1.0,) * self.dimension


def polydisc(polyradii) -> DomainSpec:
    radii = tuple(float(r) for r in polyradii)
    return DomainSpec(kind="polydisc", dimension=len(radii), polyradii=radii)


def ball(radius: float, dimension: int) -> DomainSpec:
    return DomainSpec(kind="ball", dimension=dimension, radius=float(radius))


def egg(exponents) -> DomainSpec:
    exps = tuple(float(p) for p in exponents)
    return DomainSpec(kind="egg", dimension=len(exps), exponents=exps)


def unit_disc() -> DomainSpec:
    return polydisc((1.0,))


def unit_polydisc(dimension: int) -> DomainSpec:
    return polydisc((1.0,) * dimension)


def unit_bidisc() -> DomainSpec:
    return unit_polydisc(2)


def unit_ball(dimension: int) -> DomainSpec:
    return ball(1.0, dimension)


@dataclass(frozen=True)
class SampleSet:
    """Immutable batch of points in C^n produced by a seeded sampler."""

    points: np.ndarray  # (count, n) complex128, read-only
    seed: int
    kind: str  # "interior-MC" | "boundary"

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.complex128)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]


# ---------------------------------------------------------------------------
# monomial norms
# ---------------------------------------------------------------------------


def _as_exponents(alpha) -> tuple[int, ...]:
    if isinstance(alpha, MultiIndex):
        return alpha.exponents
    exps = tuple(int(a) for a in alpha)
    if any(a < 0 for a in exps):
        raise ValueError(f"negative exponent in {alpha}")
    return exps


def _egg_inner_analytic(p: float, alpha: int, budget: float) -> float:
    # integral of t^alpha over 0 <= t <= budget^(1/p); closed form.
    if budget <= 0.0:
        return 0.0
    upper = budget ** (1.0 / p)
    return upper ** (alpha + 1) / (alpha + 1)


def _egg_simplex_quad(p: tuple[float, ...], alpha: tuple[int, ...]) -> float:
    """Integral of prod t_j^alpha_j over {t >= 0, sum t_j^p_j < 1}.

    Nested adaptive quadrature, outermost coordinates integrated by scipy's
    Gauss-Kronrod routine with the innermost coordinate done analytically.
    """
    n = len(p)

    def level(k: int, budget: float) -> float:
        if k == n - 1:
            return _egg_inner_analytic(p[k], alpha[k], budget)
        if budget <= 0.0:
            return 0.0
        upper = budget ** (1.0 / p[k])
        val, _ = quad(
            lambda t: t ** alpha[k] * level(k + 1, budget - t ** p[k]),
            0.0,
            upper,
            epsabs=1e-15,
            epsrel=QUAD_REL_TOL,
            limit=200,
        )
        return val

    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            value = level(0, 1.0)
        except IntegrationWarning as exc:  # pragma: no cover - defensive
            raise QuadratureError(
                f"simplex quadrature did not converge for p={p}, alpha={alpha}: {exc}"
            ) from exc
    return value


def _egg_simplex_beta(p: tuple[float, ...], alpha: tuple[int, ...]) -> float:
    # Dirichlet integral: prod Gamma(a_j)/p_j over Gamma(1 + sum a_j),
    # a_j = (alpha_j + 1)/p_j.  Used as a cross-check of the quadrature.
    total = 0.0
    log_num = 0.0
    for pj, aj in zip(p, alpha):
        x = (aj + 1.0) / pj
        total += x
        log_num += math.lgamma(x) - math.log(pj)
    return math.exp(log_num - math.lgamma(1.0 + total))


@lru_cache(maxsize=262144)
def _monomial_norm_sq_cached(domain: DomainSpec, exps: tuple[int, ...]) -> float:
    n = domain.dimension
    if domain.kind == "polydisc":
        value = 1.0
        for r, a in zip(domain.polyradii, exps):
            value *= math.pi * r ** (2 * a + 2) / (a + 1)
        return value
    if domain.kind == "ball":
        num = 1
        for a in exps:
            num *= math.factorial(a)
        ratio = Fraction(num, math.factorial(n + sum(exps)))
        return math.pi ** n * float(ratio) * domain.radius ** (2 * sum(exps) + 2 * n)
    # egg: nested quadrature, cross-checked against the Dirichlet closed form
    quad_val = _egg_simplex_quad(domain.exponents, exps)
    beta_val = _egg_simplex_beta(domain.exponents, exps)
    if not math.isfinite(quad_val) or abs(quad_val - beta_val) > QUAD_FAIL_TOL * abs(beta_val):
        raise QuadratureError(
            f"egg monomial norm disagreement for alpha={exps}: "
            f"quadrature {quad_val!r} vs closed form {beta_val!r}"
        )
    return math.pi ** n * quad_val


def monomial_norm_sq(domain: DomainSpec, alpha) -> float:
    """Squared L^2 norm of the monomial z^alpha over the domain."""
    exps = _as_exponents(alpha)
    if len(exps) != domain.dimension:
        raise ValueError(
            f"multi-index length {len(exps)} does not match dimension {domain.dimension}"
        )
    return _monomial_norm_sq_cached(domain, exps)


def volume(domain: DomainSpec) -> float:
    """Lebesgue volume of the domain (monomial norm of the constant 1)."""
    return monomial_norm_sq(domain, (0,) * domain.dimension)


# ---------------------------------------------------------------------------
# gauge and membership
# ---------------------------------------------------------------------------


def _point(domain: DomainSpec, z) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128)
    if z.shape != (domain.dimension,):
        raise ValueError(f"point shape {z.shape} does not match dimension {domain.dimension}")
    return z


def gauge(domain: DomainSpec, point) -> float:
    """Defining gauge: < 1 inside, 1 on the boundary, > 1 outside."""
    z = _point(domain, point)
    return float(gauge_batch(domain, z[None, :])[0])


def gauge_batch(domain: DomainSpec, points: np.ndarray) -> np.ndarray:
    """Vectorized gauge over an (m, n) array of points."""
    pts = np.asarray(points, dtype=np.complex128)
    if domain.kind == "polydisc":
        return np.max(np.abs(pts) / np.asarray(domain.polyradii), axis=1)
    if domain.kind == "ball":
        return np.linalg.norm(pts, axis=1) / domain.radius
    p = np.asarray(domain.exponents)
    return np.sum(np.abs(pts) ** (2.0 * p), axis=1)


def contains(domain: DomainSpec, point) -> bool:
    return gauge(domain, point) < 1.0


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------


def _propose_in_bounding_polydisc(rng: np.random.Generator, count: int, radii) -> np.ndarray:
    # uniform on each coordinate disc: rho = R sqrt(u), angle = 2 pi v
    n = len(radii)
    u = rng.random((count, n))
    v = rng.random((count, n))
    rho = np.asarray(radii) * np.sqrt(u)
    return rho * np.exp(2j * np.pi * v)


def sample_interior(domain: DomainSpec, count: int, seed: int) -> SampleSet:
    """Uniform interior points by rejection from the bounding polydisc.

    Deterministic for a fixed seed.  Raises RejectionEfficiencyError if the
    acceptance rate drops below 1e-3, which signals a badly fitting
    bounding box.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    radii = domain.bounding_radii
    accepted: list[np.ndarray] = []
    n_accepted = 0
    n_proposed = 0
    while n_accepted < count:
        batch = _propose_in_bounding_polydisc(rng, _REJECTION_BATCH, radii)
        keep = batch[gauge_batch(domain, batch) < 1.0]
        accepted.append(keep)
        n_accepted += keep.shape[0]
        n_proposed += _REJECTION_BATCH
        if n_proposed >= 20000 and n_accepted < _MIN_EFFICIENCY * n_proposed:
            raise RejectionEfficiencyError(
                f"acceptance rate {n_accepted}/{n_proposed} below {_MIN_EFFICIENCY:g}; "
                "the bounding polydisc is far larger than the domain - use a smaller "
                "bounding box or a dedicated sampler"
            )
    points = np.concatenate(accepted, axis=0)[:count]
    return SampleSet(points=points, seed=seed, kind="interior-MC")


def _directions_on_sphere(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    g = rng.standard_normal((count, n, 2))
    d = g[..., 0] + 1j * g[..., 1]
    norms = np.linalg.norm(d, axis=1, keepdims=True)
    # a zero row has probability 0; regenerate deterministically if it happens
    while np.any(norms == 0.0):  # pragma: no cover
        bad = norms[:, 0] == 0.0
        g = rng.standard_normal((int(bad.sum()), n, 2))
        d[bad] = g[..., 0] + 1j * g[..., 1]
        norms = np.linalg.norm(d, axis=1, keepdims=True)
    return d / norms


def _radial_scale_to_boundary(domain: DomainSpec, directions: np.ndarray) -> np.ndarray:
    """Per-row scale t > 0 with gauge(t * d) = 1."""
    if domain.kind == "polydisc":
        return 1.0 / np.max(np.abs(directions) / np.asarray(domain.polyradii), axis=1)
    if domain.kind == "ball":
        return domain.radius / np.linalg.norm(directions, axis=1)
    # egg: gauge(t d) is strictly increasing in t; bisection
    def g_of(t):
        return gauge_batch(domain, directions * t[:, None])

    m = directions.shape[0]
    lo = np.zeros(m)
    hi = np.ones(m)
    for _ in range(64):
        too_low = g_of(hi) < 1.0
        if not np.any(too_low):
            break
        hi[too_low] *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        below = g_of(mid) < 1.0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def sample_boundary(domain: DomainSpec, count: int, seed: int) -> SampleSet:
    """Boundary points: sphere directions radially projected onto gauge = 1."""
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    d = _directions_on_sphere(rng, count, domain.dimension)
    t = _radial_scale_to_boundary(domain, d)
    points = d * t[:, None]
    dev = np.max(np.abs(gauge_batch(domain, points) - 1.0))
    if dev > BOUNDARY_TOL:
        raise RejectionEfficiencyError(
            f"boundary projection failed: max |gauge - 1| = {dev:g}"
        )
    return SampleSet(points=points, seed=seed, kind="boundary")


# ---------------------------------------------------------------------------
# JSON configuration
# ---------------------------------------------------------------------------

_DOMAIN_KEYS = {"kind", "dimension", "polyradii", "radius", "exponents"}


def _key_line(text: str, key: str) -> str:
    """Best-effort line locator for a key inside the raw JSON text."""
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return f"line {i}"
    return "unknown line"


def domain_from_dict(cfg: dict, text: str = "") -> DomainSpec:
    """Build a DomainSpec from a parsed config mapping, rejecting unknown keys."""
    if not isinstance(cfg, dict):
        raise ConfigError(f"domain config must be a JSON object, got {type(cfg).__name__}")
    unknown = set(cfg) - _DOMAIN_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"{_key_line(text, key)}: unknown domain key {key!r}")
    kind = cfg.get("kind")
    if kind not in ("polydisc", "ball", "egg"):
        raise ConfigError(
            f"{_key_line(text, 'kind')}: \"kind\" must be one of "
            f"\"polydisc\", \"ball\", \"egg\"; got {kind!r}"
        )
    dim = cfg.get("dimension")
    if not isinstance(dim, int) or dim < 1:
        raise ConfigError(
            f"{_key_line(text, 'dimension')}: \"dimension\" must be a positive integer"
        )

    def _float_list(key):
        val = cfg.get(key)
        if (
            not isinstance(val, list)
            or len(val) != dim
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in val)
        ):
            raise ConfigError(
                f"{_key_line(text, key)}: \"{key}\" must be a list of {dim} numbers"
            )
        return tuple(float(x) for x in val)

    try:
        if kind == "polydisc":
            if "radius" in cfg or "exponents" in cfg:
                extra = "radius" if "radius" in cfg else "exponents"
                raise ConfigError(
                    f"{_key_line(text, extra)}: \"{extra}\" does not apply to a polydisc"
                )
            return DomainSpec(kind=kind, dimension=dim, polyradii=_float_list("polyradii"))
        if kind == "ball":
            if "polyradii" in cfg or "exponents" in cfg:
                extra = "polyradii" if "polyradii" in cfg else "exponents"
                raise ConfigError(
                    f"{_key_line(text, extra)}: \"{extra}\" does not apply to a ball"
                )
            radius = cfg.get("radius")
            if not isinstance(radius, (int, float)) or isinstance(radius, bool) or radius <= 0:
                raise ConfigError(
                    f"{_key_line(text, 'radius')}: \"radius\" must be a positive number"
                )
            return DomainSpec(kind=kind, dimension=dim, radius=float(radius))
        if "polyradii" in cfg or "radius" in cfg:
            extra = "polyradii" if "polyradii" in cfg else "radius"
            raise ConfigError(
                f"{_key_line(text, extra)}: \"{extra}\" does not apply to an egg"
            )
        return DomainSpec(kind=kind, dimension=dim, exponents=_float_list("exponents"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def domain_from_json(text: str) -> DomainSpec:
    """Parse a strict JSON domain document with line-precise errors."""
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return domain_from_dict(cfg, text)


def domain_to_dict(domain: DomainSpec) -> dict:
    cfg: dict = {"kind": domain.kind, "dimension": domain.dimension}
    if domain.kind == "polydisc":
        cfg["polyradii"] = list(domain.polyradii)
    elif domain.kind == "ball":
        cfg["radius"] = domain.radius
    else:
        cfg["exponents"] = list(domain.exponents)
    return cfg


def domain_hash(domain: DomainSpec) -> str:
    """Stable hash of the canonical domain config, for report provenance."""
    canonical = json.dumps(domain_to_dict(domain), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]
