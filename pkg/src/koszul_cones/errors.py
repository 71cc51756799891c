"""Exception types shared across the package."""


class KoszulConesError(Exception):
    pass


class CompositionNotZero(KoszulConesError, ArithmeticError):
    """Two consecutive differentials do not compose to zero."""


class NotPrime(KoszulConesError, ValueError):
    pass


class DegreeMismatch(KoszulConesError, ValueError):
    pass


class OutOfRange(KoszulConesError, ValueError):
    pass


class HypothesisViolation(KoszulConesError, ValueError):
    """The parameters fall outside the range where an identity is asserted."""
