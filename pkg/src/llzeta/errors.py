"""Exception hierarchy."""


class LLZetaError(Exception):
    pass


class DomainError(LLZetaError, ValueError):
    """Input lies outside the region where the operation is defined."""


class ConvergenceDomainError(DomainError):
    """Series evaluated outside its half-plane of convergence."""


class PreconditionError(LLZetaError, ValueError):
    pass


class UnsupportedTailError(LLZetaError):
    """A tail descriptor has no closed form for the requested quantity."""


class BranchUndefinedError(DomainError):
    """An argument was requested at a zero coordinate."""


class StepRefinementError(LLZetaError):
    """Argument unwrapping became ambiguous; resample the path more finely."""


class TruncationError(LLZetaError):
    """The requested tolerance could not be certified within the allowed work."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ContourCollisionError(LLZetaError):
    """An integrand pole lies on (or too close to) the integration contour."""


class ConventionError(DomainError):
    """Point outside the sector where a closed form was derived."""


class PoleError(DomainError):
    pass
