"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the admissible parameter domain."""


class UnsupportedLoadError(ValueError):
    """The load system contains features the operation does not handle."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the best available estimate and the achieved error bound.
    """

    def __init__(self, message, estimate, error_bound):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound
