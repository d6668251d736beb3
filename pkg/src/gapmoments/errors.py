"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the region where a formula or set is defined."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole (Gamma pole or weight singularity)."""


class ConvergenceError(ArithmeticError):
    """A series or quadrature failed to reach its tolerance.

    ``partial`` holds the best available estimate and ``count`` the number of
    terms (series) or refinement levels / nodes (quadrature) consumed.
    """

    def __init__(self, message, partial=float("nan"), count=0, error=float("nan")):
        super().__init__(message)
        self.partial = partial
        self.count = count
        self.error = error
