"""Custom exception classes for sepforge.

Every error carries the exit code the command line reports for it.
"""

from typing import Optional


class SepforgeError(Exception):
    """Base exception class for sepforge errors."""

    def __init__(self, message: str, exit_code: int = 1):
        """Initialize the exception.

        Args:
            message: Error message to display.
            exit_code: Process exit code used by the command line.
        """
        self.message = message
        self.exit_code = exit_code
        super().__init__(self.message)


class UsageError(SepforgeError):
    """Exception raised for bad command-line usage."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class ParseError(SepforgeError):
    """Exception raised when an input document cannot be parsed.

    Attributes:
        line: 1-based line of the offending input, if known.
        offset: 1-based column or JSON path of the offending input, if known.
    """

    def __init__(self, message: str, line: Optional[int] = None, offset: Optional[object] = None):
        self.line = line
        self.offset = offset
        location = []
        if line is not None:
            location.append(f"line {line}")
        if offset is not None:
            location.append(f"offset {offset}")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message, exit_code=2)


class CapacityError(SepforgeError):
    """Exception raised when an input exceeds a configured cap."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=3)


class InvalidSeparationError(SepforgeError):
    """Exception raised when a pair of vertex sets is not a separation."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class InvalidProfileError(SepforgeError):
    """Exception raised when an orientation is not a well-formed profile."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class IncompleteProfileError(InvalidProfileError):
    """Exception raised when a profile leaves a separation unoriented."""


class InvalidBlockError(SepforgeError):
    """Exception raised for a vertex set that is not a k-block."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class InvalidTorsoError(SepforgeError):
    """Exception raised for adhesion sets outside the torso part."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class StructureError(SepforgeError):
    """Exception raised for a decomposition tree that is not a tree."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class PreconditionError(SepforgeError):
    """Exception raised when an operation is called outside its hypotheses."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class NoKappaError(PreconditionError):
    """Exception raised when no separation distinguishes two profiles of a set."""


class LemmaViolationError(SepforgeError):
    """Exception raised when a proved structural property fails at runtime."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=1)


class VerificationError(SepforgeError):
    """Exception raised when a verification report contains violations."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=1)


class InternalError(SepforgeError):
    """Exception raised when a loop guard trips."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=1)
