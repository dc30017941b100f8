"""Exception hierarchy shared by all modules."""


class OQHError(Exception):
    """Base class for errors raised by oqhlab."""


class ParameterError(OQHError, ValueError):
    """An argument is outside the documented domain."""


class ResourceError(OQHError, RuntimeError):
    """The requested computation exceeds a configured size cap."""


class StructuralError(OQHError, ValueError):
    """Inputs are well-typed but structurally degenerate (empty, zero, malformed)."""


class NumericError(OQHError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics
