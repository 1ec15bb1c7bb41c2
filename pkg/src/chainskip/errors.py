"""Exception types shared across the package."""


class ChainskipError(Exception):
    """Base class for all package errors."""


class UnknownQubitError(ChainskipError):
    """A referenced qubit is not a variable of the model."""


class MissingVariableError(ChainskipError):
    """An assignment does not cover every model variable."""


class ModelTooLargeError(ChainskipError):
    """Exhaustive enumeration was requested beyond the configured limit."""


class InvalidEmbeddingError(ChainskipError):
    """An embedding violates chain or connectivity requirements."""


class EmbeddingFailure(ChainskipError):
    """The heuristic embedder could not place the source graph."""

    def __init__(self, message, attempts=0, best_partial=0):
        super().__init__(message)
        self.attempts = attempts
        self.best_partial = best_partial


class ConfigError(ChainskipError):
    """Invalid parameters or configuration input."""
