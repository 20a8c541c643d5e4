"""Exception types shared across the package."""


class JacpolyError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(JacpolyError):
    """Syntax error in polynomial text; carries the offending position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class RingMismatchError(JacpolyError):
    """Operands live in incompatible coefficient rings."""


class PreconditionError(JacpolyError):
    """An operation was invoked on inputs outside its documented domain."""


class StructuralError(JacpolyError):
    """A computed object failed a structural requirement it should satisfy."""


class InvariantViolation(JacpolyError):
    """An internal invariant broke; carries a diagnostic payload."""

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload
