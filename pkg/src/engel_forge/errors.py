"""Exception types shared across the package."""

from __future__ import annotations


class EngelForgeError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(EngelForgeError, ValueError):
    """Arguments violate an operation's preconditions."""


class TooLargeError(EngelForgeError, RuntimeError):
    """A size threshold (enumeration, quotient degree) would be exceeded."""


class NotSolubleError(EngelForgeError, ValueError):
    """A soluble group was required."""


class ParseError(EngelForgeError, ValueError):
    """Malformed cycle notation or group file."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
