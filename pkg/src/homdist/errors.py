"""Exception types shared across the package."""


class HomdistError(Exception):
    """Base class for errors raised by this package."""


class Graph6Error(HomdistError, ValueError):
    """Malformed graph6 record; carries the byte offset of the defect."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class GuardExceeded(HomdistError, ValueError):
    """Input exceeds a brute-force or pattern size guard."""


class ConfigMismatch(HomdistError, ValueError):
    """Feature configurations of the two sides differ."""


class ChecksumMismatch(HomdistError, ValueError):
    """Embeddings bound to different pattern families were combined."""


class NormalizationError(HomdistError, ValueError):
    """Embedding normalization state does not match the operation."""


class BudgetExceeded(HomdistError, RuntimeError):
    """Search node budget ran out before an answer was proven."""
