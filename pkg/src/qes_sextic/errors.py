"""Exception hierarchy shared by all modules."""


class QesError(Exception):
    """Base class for every error raised by this package."""


class NonConvergence(QesError, ArithmeticError):
    """Iterative refinement did not reach the requested precision."""


class NotAnEigenvalue(QesError, ValueError):
    """Forward substitution left a residual in the final recursion row."""


class EnvelopeOverflow(QesError, OverflowError):
    """The exponential envelope is not representable at a grid point."""


class SquareFull(QesError, ArithmeticError):
    """The polynomial shares a nonconstant factor with its derivative."""

    def __init__(self, message, gcd=None):
        super().__init__(message)
        self.gcd = gcd


class NoTransition(QesError, ValueError):
    """The real-root count does not change across the search bracket."""


class CapExceeded(QesError, ValueError):
    """Requested size is beyond the documented cap of an exact routine."""


class NotBroken(QesError, ValueError):
    """The spectrum is entirely real, so no pair has collided."""


class TooShort(QesError, ValueError):
    """Sequence too short for the requested number of extrapolation levels."""


class ComplexRegime(QesError, ValueError):
    """Turning-point factorization needs b**2 >= 12."""


class NoRealTurningPoints(QesError, ValueError):
    pass


class NegativeIntegrand(QesError, ValueError):
    pass


class NoRoot(QesError, ArithmeticError):
    pass


class StiffnessFailure(QesError, ArithmeticError):
    """Adaptive step control collapsed while integrating along a ray."""


class NodeInInterval(QesError, ValueError):
    """The good solution vanishes inside the reduction-of-order interval."""
