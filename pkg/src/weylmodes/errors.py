"""Exception types raised across the package."""


class UnsupportedRank(ValueError):
    """Root system family/rank combination outside the supported range."""


class InternalClosureError(RuntimeError):
    """Reflection closure disagreed with the tabulated root count."""


class DomainError(ValueError):
    """A point lies on or outside a wall where sin(q_alpha) <= 0."""


class NoConvergence(RuntimeError):
    """Newton iteration failed to reach the gradient tolerance."""


class NotSymmetric(ValueError):
    pass


class SingularInput(ValueError):
    pass
