"""Sparse polynomials in n complex variables, keyed by exponent tuples.

Used for Caratheodory certificates and for products of basis functions;
arithmetic is exact coefficient convolution.  On the Reinhardt domains of
this package monomials are orthogonal, so L^2 norms reduce to weighted sums
of squared coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import accel
from .domains import DomainSpec, monomial_norm_sq


@dataclass
class Poly:
    """Polynomial sum of coeffs[alpha] * z^alpha with alpha exponent tuples."""

    dimension: int
    coeffs: dict[tuple[int, ...], complex] = field(default_factory=dict)

    @classmethod
    def zero(cls, dimension: int) -> "Poly":
        return cls(dimension, {})

    @classmethod
    def monomial(cls, alpha, coeff: complex = 1.0) -> "Poly":
        alpha = tuple(int(a) for a in alpha)
        if coeff == 0:
            return cls(len(alpha), {})
        return cls(len(alpha), {alpha: complex(coeff)})

    @classmethod
    def constant(cls, dimension: int, value: complex) -> "Poly":
        return cls.monomial((0,) * dimension, value)

    def copy(self) -> "Poly":
        return Poly(self.dimension, dict(self.coeffs))

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.coeffs:
            return -1
        return max(sum(a) for a in self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch")
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            v = out.get(a, 0.0) + c
            if v == 0:
                out.pop(a, None)
            else:
                out[a] = v
        return Poly(self.dimension, out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scale(-1.0)

    def scale(self, factor: complex) -> "Poly":
        if factor == 0:
            return Poly.zero(self.dimension)
        return Poly(self.dimension, {a: c * factor for a, c in self.coeffs.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        if self.dimension != other.dimension:
            raise ValueError("dimension mismatch")
        out: dict[tuple[int, ...], complex] = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                key = tuple(x + y for x, y in zip(a, b))
                v = out.get(key, 0.0) + ca * cb
                out[key] = v
        return Poly(self.dimension, {k: v for k, v in out.items() if v != 0})

    def truncated(self, degree: int) -> tuple["Poly", "Poly"]:
        """Split into (part of total degree <= degree, remainder)."""
        keep = {a: c for a, c in self.coeffs.items() if sum(a) <= degree}
        tail = {a: c for a, c in self.coeffs.items() if sum(a) > degree}
        return Poly(self.dimension, keep), Poly(self.dimension, tail)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, z) -> complex:
        z = np.asarray(z, dtype=np.complex128)
        total = 0.0 + 0.0j
        for a, c in sorted(self.coeffs.items()):
            term = c
            for k, e in enumerate(a):
                if e:
                    term *= z[k] ** e
            total += term
        return complex(total)

    def eval_at_points(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation over an (m, n) point array."""
        if not self.coeffs:
            return np.zeros(points.shape[0], dtype=np.complex128)
        items = sorted(self.coeffs.items())
        exps = np.array([a for a, _ in items], dtype=np.int64)
        weights = np.array([c for _, c in items], dtype=np.complex128)
        return accel.weighted_monomial_sum(points, exps, weights)

    def directional_derivative(self, z, direction) -> complex:
        """(X . grad p)(z) for a holomorphic direction vector X."""
        z = np.asarray(z, dtype=np.complex128)
        x = np.asarray(direction, dtype=np.complex128)
        total = 0.0 + 0.0j
        for a, c in sorted(self.coeffs.items()):
            for k, e in enumerate(a):
                if e == 0 or x[k] == 0:
                    continue
                term = c * e * x[k]
                for m, em in enumerate(a):
                    shift = em - 1 if m == k else em
                    if shift:
                        term *= z[m] ** shift
                total += term
        return complex(total)

    # -- geometry-aware helpers ---------------------------------------------

    def norm_sq(self, domain: DomainSpec) -> float:
        """Squared L^2 norm over the domain (monomial orthogonality)."""
        return float(
            sum(abs(c) ** 2 * monomial_norm_sq(domain, a) for a, c in self.coeffs.items())
        )

    def norm(self, domain: DomainSpec) -> float:
        return self.norm_sq(domain) ** 0.5


def geometric_expansion(linear: Poly, degree: int) -> Poly:
    """Truncated expansion of 1 / (1 - L) for a polynomial L with L(0) = 0.

    Returns sum of L^k for k = 0 .. degree, truncated to total degree
    ``degree``.  Valid as a Taylor expansion when |L| < 1 on the region of
    interest.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    acc = Poly.constant(linear.dimension, 1.0)
    term = Poly.constant(linear.dimension, 1.0)
    for _ in range(degree):
        term, _ = (term * linear).truncated(degree)
        if not term.coeffs:
            break
        acc = acc + term
    return acc
