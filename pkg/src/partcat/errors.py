"""Exception hierarchy shared across the package."""


class PartcatError(Exception):
    """Base class for all errors raised by this package."""


class TagMismatchError(PartcatError):
    """Operands live in different coefficient rings."""


class DivisionByZeroError(PartcatError, ZeroDivisionError):
    """Division by zero, or inversion of a non-invertible element."""


class MissingParameterError(PartcatError):
    """A numeric value for the category parameter is required but unbound."""


class CoeffParseError(PartcatError, ValueError):
    """Syntax error in a coefficient expression; carries the offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class PoleError(PartcatError):
    """Specialization at a pole of a rational-function coefficient."""


class CapExceededError(PartcatError):
    """A resource cap (Bell/Catalan growth guard) was exceeded."""


class SchemaError(PartcatError, ValueError):
    """Invalid JSON document; carries a JSON-pointer style path."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{message} (at {pointer or '/'})")
        self.pointer = pointer


class SplitError(PartcatError):
    """Idempotent splitting failed within the configured bounds."""


class ProjectorUndefinedError(PartcatError):
    """A projector is requested where its defining scalars vanish."""


class AmbiguousSummandError(PartcatError):
    """Summand identification could not single out one label."""

    def __init__(self, message: str, candidates):
        super().__init__(message)
        self.candidates = list(candidates)
