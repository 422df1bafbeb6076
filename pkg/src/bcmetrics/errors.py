"""Exception types raised across the package."""


class BcmetricsError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(BcmetricsError):
    """Invalid domain or run configuration (maps to CLI exit code 2)."""


class QuadratureError(BcmetricsError):
    """Numerical integration failed to reach the requested tolerance."""


class RejectionEfficiencyError(BcmetricsError):
    """Rejection sampling acceptance rate fell below the usable threshold."""


class DegenerateGramError(BcmetricsError):
    """The 2x2 kernel Gram matrix is numerically rank deficient."""


class UnsupportedDomainError(BcmetricsError):
    """No exact closed form is available for the requested domain."""


class MinimaxError(BcmetricsError):
    """The cutting-plane minimax solver failed to converge."""


class DegreeCapError(BcmetricsError):
    """A polynomial does not fit under the basis degree cap."""


class VerdictInconsistencyError(BcmetricsError):
    """Strictness verdict disagrees with the sign of the Hahn-bound gap."""
