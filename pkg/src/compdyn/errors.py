"""Exception hierarchy shared by every subpackage."""


class CompDynError(Exception):
    """Base class for all library errors."""


class AlphabetMismatch(CompDynError, ValueError):
    pass


class EmptyShift(CompDynError):
    """The presentation admits no bi-infinite point."""

    def __init__(self, message="empty shift space"):
        super().__init__(message)


class InconsistentOracle(CompDynError):
    pass


class NoConvergence(CompDynError):
    pass


class ExceptionalPoint(CompDynError):
    pass


class PrecisionExhausted(CompDynError):
    pass


class RationalDetected(CompDynError):
    def __init__(self, value, message=None):
        self.value = value
        super().__init__(message or f"rational value {value} detected within oracle precision")


class InfeasibleWeights(CompDynError, ValueError):
    pass


class ZeroHits(CompDynError):
    """No return to the Bowen ball; ``bound`` holds the fallback lower estimate."""

    def __init__(self, bound, message=None):
        self.bound = bound
        super().__init__(message or f"no returns within the Bowen ball (lower bound {bound:.4g})")
