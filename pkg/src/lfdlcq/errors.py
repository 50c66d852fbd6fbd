"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """Requested computation exceeds a configured size cap."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to reach its tolerance.

    Carries whatever diagnostic the solver had at the point of failure:
    ``best_residual`` for eigensolvers, ``trace`` for the renormalization
    search.
    """

    def __init__(self, message, best_residual=None, trace=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.trace = trace


class InfeasibleSeedError(ValueError):
    """The analytic renormalization seed is unusable (bare mass squared <= 0)."""


class DegenerateTruncationError(ValueError):
    """A probing-scale cutoff removed essentially all of the state."""
