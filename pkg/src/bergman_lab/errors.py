"""Exception types raised across the package."""


class BergmanLabError(ValueError):
    """Base class for all numeric/domain errors."""


class NonMember(BergmanLabError):
    """A point lies outside the domain an operation requires."""


class PoleError(BergmanLabError):
    """A kernel denominator vanishes (only reachable on the closure)."""


class CriticalValue(BergmanLabError):
    """A point is a critical value of a proper map (local inverses collide)."""


class NotInRange(BergmanLabError):
    """A polynomial is not in the range of the Gamma operator."""


class OutOfRange(BergmanLabError):
    """A parameter violates its admissible interval."""


class NonFinite(BergmanLabError):
    """An integrand produced a non-finite value."""


class SearchExhausted(BergmanLabError):
    """A deterministic search ran out of budget without a witness."""
