"""Exception hierarchy shared by every module."""


class ModlgError(Exception):
    """Base class for all library errors."""


class InvalidModulus(ModlgError, ValueError):
    pass


class ShapeMismatch(ModlgError, ValueError):
    pass


class NotInvertible(ModlgError, ValueError):
    pass


class NotADivisor(ModlgError, ValueError):
    pass


class Unsupported(ModlgError):
    pass


class CapExceeded(ModlgError):
    """Raised when an enumeration would exceed its element cap."""

    def __init__(self, cap, what="closure"):
        super().__init__(f"{what} exceeds cap of {cap} elements")
        self.cap = cap


class NotSimple(ModlgError):
    pass


class PreconditionViolated(ModlgError):
    """A documented precondition does not hold; ``condition`` names it."""

    def __init__(self, condition):
        super().__init__(condition)
        self.condition = condition


class NotTraceZero(ModlgError, ValueError):
    pass


class SearchExhausted(ModlgError):
    pass


class BadReduction(ModlgError, ValueError):
    pass


class SmallPrime(ModlgError, ValueError):
    pass


class ParseError(ModlgError, ValueError):
    """Malformed generator file. ``index`` names the offending generator, if any."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index
