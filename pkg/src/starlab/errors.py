"""Exception taxonomy shared across the package."""


class StarlabError(Exception):
    """Base class for all package-specific errors."""


class EncodingError(StarlabError):
    """Bad ground-set encoding: duplicate labels, out-of-range indices, mixed grounds."""


class ParameterError(StarlabError):
    """Arguments outside an operation's documented domain."""


class ResourceError(StarlabError):
    """A configured guard (ground width, member cap, partition cap) would be exceeded."""


class PreconditionError(StarlabError):
    """A checked mathematical precondition does not hold for the given inputs."""


class ParseError(StarlabError):
    """Malformed persisted artifact (family JSON, corpus spec)."""
