"""Exception types shared across the package."""


class PvalMetaError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PvalMetaError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ConvergenceError(PvalMetaError, RuntimeError):
    """An iterative scheme failed to converge within its iteration cap.

    For valid inputs this signals an internal defect, not a user error.
    """


class QuadratureError(PvalMetaError, RuntimeError):
    """Numerical integration did not reach the requested tolerance.

    Carries the best value obtained and the achieved error bound so callers
    can decide whether the result is still usable.
    """

    def __init__(self, message: str, value: float, error_bound: float):
        super().__init__(f"{message} (value={value!r}, error_bound={error_bound!r})")
        self.value = value
        self.error_bound = error_bound


class BracketError(PvalMetaError, RuntimeError):
    """A root-bracketing search could not enclose the requested target."""
