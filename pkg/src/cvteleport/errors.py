"""Exception types raised across the package."""


class CVTeleportError(Exception):
    """Base class for all package-specific errors."""


class DomainError(CVTeleportError, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class BranchPointError(DomainError):
    """Complex-log argument hit a branch point (zero argument)."""


class UnconfinedModeError(CVTeleportError):
    """Surface mode is not bound to the sheet (Re(alpha) <= 0)."""


class SingularModulationError(CVTeleportError):
    """Permittivity modulation evaluated at the Z0*zeta = +/-2 pole."""


class EigenSolveError(CVTeleportError):
    """Eigenvalue computation failed to converge."""


class UnstableSystemError(CVTeleportError):
    """Drift matrix has an eigenvalue with non-negative real part."""


class SolveError(CVTeleportError):
    """Linear-algebra solve produced an unacceptable residual."""


class StepSizeError(CVTeleportError, ValueError):
    """Stochastic-integrator step does not resolve the fastest eigenvalue."""


class SingularMatrixError(CVTeleportError):
    """(A - i*omega*I) was singular at the requested frequency."""


class QuadratureError(CVTeleportError):
    """Adaptive quadrature failed to reach tolerance within its budget."""


class NonPhysicalCMError(CVTeleportError, ValueError):
    """Covariance matrix violates the uncertainty relation beyond tolerance."""


class NonPositiveGammaError(CVTeleportError, ValueError):
    """Fidelity noise matrix has non-positive determinant."""


class ParseError(CVTeleportError, ValueError):
    """Config file is not valid JSON."""


class ValidationError(CVTeleportError, ValueError):
    """Config parsed but contains an invalid or unknown field."""
