"""Exception types shared across the engine."""


class SquashError(Exception):
    """Base class for all engine errors."""


class InvalidInputError(SquashError):
    """Caller passed input that violates an operation's preconditions."""


class ConfigError(SquashError):
    """A configuration value is out of its allowed range."""


class ParseError(SquashError):
    """An input file does not match its declared schema."""


class BackendError(SquashError):
    """A generation/answering/classification backend failed."""


class TransportError(BackendError):
    """The backend was unreachable after the configured retries."""

    def __init__(self, message, attempts=None):
        super().__init__(message)
        self.attempts = attempts


class ProtocolError(BackendError):
    """The backend replied with something outside the wire protocol."""


class PipelineError(SquashError):
    """A document run could not produce any output."""
