"""Exception hierarchy for the spectral-gap toolkit."""


class SpectralGapError(Exception):
    """Base class for all toolkit errors."""


class DomainError(SpectralGapError):
    """Coefficient function evaluated at or past a tangent pole, or a
    parameter outside its admissible range."""


class InvalidDiameter(SpectralGapError):
    """Diameter incompatible with the drift coefficients.

    Carries ``max_diameter``, the largest admissible D for the drift.
    """

    def __init__(self, message, max_diameter=None):
        super().__init__(message)
        self.max_diameter = max_diameter


class HypothesisError(SpectralGapError):
    """A closed-form bound was requested with its curvature hypothesis unmet."""


class NoConvergence(SpectralGapError):
    """Eigenvalue refinement budget exhausted before the tolerance was met."""


class BracketFailure(SpectralGapError):
    """Shooting method found no sign change below its search ceiling."""


class PreconditionError(SpectralGapError):
    """A verification routine was handed data violating its preconditions
    (e.g. nonzero boundary values where a Dirichlet condition is assumed)."""


class CertificateFailure(SpectralGapError):
    """A proof-replay certificate has a failing step.

    Carries ``step_name``, the first failing step.
    """

    def __init__(self, message, step_name=None):
        super().__init__(message)
        self.step_name = step_name
