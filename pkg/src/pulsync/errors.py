"""Exception hierarchy shared by every layer of the package."""


class PulsyncError(Exception):
    """Base class for errors raised by this package."""


class ConfigurationError(PulsyncError, ValueError):
    """A construction or run was requested with parameters it cannot honour."""


class ProtocolViolation(PulsyncError):
    """A correct node broke an engine-level invariant (e.g. its message bound)."""


class SchemaError(PulsyncError, KeyError):
    """A trace or payload did not match the structure it was checked against."""

    def __str__(self) -> str:  # KeyError quotes its argument; keep messages readable
        return str(self.args[0]) if self.args else ""


class ConsensusAbort(PulsyncError):
    """Raised by a consensus routine that cannot continue with its inputs."""
