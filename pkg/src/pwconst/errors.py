"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class ContractError(ValueError):
    """Caller broke a documented precondition (missing data, bad shapes)."""


class BracketError(ValueError):
    """Root bracket without a sign change."""


class ConvergenceError(RuntimeError):
    """Iteration stopped before reaching its tolerance.

    ``best`` holds the best available estimate so callers may still use it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ConstructionError(ValueError):
    """A derived object could not be assembled from its inputs."""
