"""Exception types shared across the package."""


class ParameterDomainError(ValueError):
    """A parameter lies outside the range an operation is defined for."""


class DomainError(ValueError):
    """An evaluation point lies outside the open interval (-1, 1)."""


class SamplingError(ValueError):
    """A function sampler returned non-finite values."""


class BasisMismatchError(ValueError):
    """Two Jacobi expansions (or an expansion and an operator) use different parameters."""


class DegenerateFunctionError(ValueError):
    """A modulus-type function vanishes where a ratio needs it to be positive."""


class DegreeViolationError(RuntimeError):
    """A construction that must yield a polynomial of bounded degree did not."""


class IterationLimitError(RuntimeError):
    """An iterative solver ran out of iterations.

    The last iterate is kept on ``last`` so callers can still inspect it.
    """

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class ConfigError(ValueError):
    """An experiment configuration is malformed or violates a regime."""
