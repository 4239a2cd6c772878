"""Error types raised across the raptorchain package."""


class RaptorChainError(ValueError):
    """Base class for domain errors."""


class FieldError(RaptorChainError):
    """Unsupported field width or an element outside GF(2^p)."""


class InsufficientSymbols(RaptorChainError):
    """Fewer than W symbols are available for erasure decoding."""


class IntegrityError(RaptorChainError):
    """Coded data disagrees with itself or with the recorded block digest."""


class EmptyFeasible(RaptorChainError):
    """The selection constraints leave no feasible budget."""


class SizeOverflow(RaptorChainError):
    """A serialized block does not fit into the configured block size."""


class ScenarioError(RaptorChainError):
    """A scenario file failed validation."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
