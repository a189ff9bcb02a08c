"""Exception hierarchy shared by all modules."""


class CRNError(Exception):
    """Base class for errors raised by crnhomeo."""


class NetworkError(CRNError, ValueError):
    """A network violates a structural invariant."""


class ParseError(CRNError, ValueError):
    """Malformed network text."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class UnboundRateError(CRNError, KeyError):
    """A rate symbol has no numeric value."""

    def __str__(self) -> str:
        return f"unbound rate symbol {self.args[0]!r}"


class ConfigurationError(CRNError, ValueError):
    """The requested analysis does not apply to this network."""


class CapacityError(CRNError, RuntimeError):
    """An exhaustive enumeration exceeded its configured cap."""
