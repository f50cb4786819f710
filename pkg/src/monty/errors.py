"""Exception types shared across the package."""


class MontyError(Exception):
    """Base class for all package errors."""


class ArgumentError(MontyError, ValueError):
    """An argument violates a documented precondition."""


class DimensionError(ArgumentError):
    """Matrix shapes are incompatible with the requested operation."""


class NotAGP(MontyError):
    """A vector fails the geometric-progression congruences modulo N."""


class DegenerateGP(MontyError):
    """The Hankel matrix of a progression is singular or otherwise unusable."""


class DegeneratePair(MontyError):
    """Lattice reduction produced a pair outside the theorem hypotheses.

    The offending pair is attached so callers can still report it.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class FactorFound(MontyError):
    """A nontrivial factor of N surfaced during a gcd check.

    Not a failure in the usual sense: for a factoring workflow this is the
    best possible outcome, so callers typically report it rather than abort.
    """

    def __init__(self, factor, N, where=""):
        self.factor = factor
        self.N = N
        self.where = where
        msg = f"nontrivial factor {factor} of N={N}"
        if where:
            msg += f" ({where})"
        super().__init__(msg)


class InvariantViolation(MontyError, AssertionError):
    """An identity guaranteed by theory did not hold; indicates a bug or bad input."""
