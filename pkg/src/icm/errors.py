"""Exception hierarchy shared by all icm modules."""


class IcmError(Exception):
    """Base class for all library errors."""


class DomainError(IcmError):
    """Invalid input data: malformed map, coordinate out of [0,1], bad argument."""


class ParseError(DomainError):
    """Malformed .pwl text; carries a 1-based line number when available."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(IcmError):
    """A documented hypothesis of the operation does not hold for the inputs."""


class ResourceError(IcmError):
    """A configured resource cap (breakpoint count) would be exceeded."""


class NotFoundError(IcmError):
    """An exhaustive exact search found no witness; signals a hypothesis violation."""


class InternalInvariantError(IcmError):
    """A condition the theory guarantees failed; indicates invalid input or a bug."""
