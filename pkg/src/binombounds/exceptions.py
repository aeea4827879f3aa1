"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested function."""


class CapacityError(ValueError):
    """The exact oracle was asked for a size above its configured limit."""


class ConvergenceError(ArithmeticError):
    """An iterative method stopped before reaching its tolerance.

    ``estimate`` holds the last iterate (or partial integral) and
    ``iterations`` the number of steps spent, so callers can decide whether
    the partial answer is still usable.
    """

    def __init__(self, message, estimate=None, iterations=None):
        super().__init__(message)
        self.estimate = estimate
        self.iterations = iterations


class RootBracketError(RuntimeError):
    """A sign-change bracket that should exist could not be found."""
