"""Exception types shared across the package."""


class CausalConfError(Exception):
    """Base class for all errors raised by this package."""


class SingularBlock(CausalConfError):
    """A conditioning block or factorization target is numerically singular."""


class SingularCovariance(CausalConfError):
    """The empirical covariance is rank deficient (n < d or collinear data)."""


class DimensionTooLarge(CausalConfError):
    """An enumeration guard tripped: the request would exhaust time or memory."""


class InvalidSampleCount(CausalConfError):
    """A sample count must be a positive integer."""


class GenerationExhausted(CausalConfError):
    """Rejection sampling failed to produce an admissible model."""


class DegenerateQuadratic(CausalConfError):
    """A quadratic head coefficient that must be positive came out non-positive.

    Signals an ill-conditioned empirical covariance. Carries the hypothesis
    class that was being processed when the degeneracy was detected.
    """

    def __init__(self, message, hypothesis_class=None):
        super().__init__(message)
        self.hypothesis_class = hypothesis_class


class ParseError(CausalConfError):
    """Malformed tabular input; carries the offending 1-based line number."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line
