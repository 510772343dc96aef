"""Exception types raised by the library."""


class SkorokhodError(ValueError):
    """Base class for all library errors."""


class DomainError(SkorokhodError):
    """An argument lies outside the domain of the operation."""


class HorizonMismatchError(SkorokhodError):
    """Two paths that must share a time horizon do not."""


class PreconditionError(SkorokhodError):
    """A documented precondition of a construction is violated."""


class ConfigurationError(SkorokhodError):
    """A test battery was configured with invalid inputs."""


class ParseError(SkorokhodError):
    """A path or integrator file is malformed."""
