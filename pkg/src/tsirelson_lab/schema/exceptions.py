"""schema/exceptions.py"""

from typing import Any


class TsirelsonError(Exception):
    """
    Base exception for all errors raised by the library and the command line.

    This class extends the standard Exception class and adds a code attribute which doubles as the process exit
    status of the command line front end.

    Properties:
        code (int | None): An optional error code, the exit status used by the command line.
    """
    code: int | None = None

    def __init__(self, message: str = None, code: int | None = None):
        """Initializes the TsirelsonError with an optional message and code.

        Args:
            :param message: (str, optional):     Error message. If empty or None, defaults to "Tsirelson error".
            :param code: (int | None, optional): An error code, the exit status used by the command line.
        """
        super().__init__(message if message and message.strip() else "Tsirelson error")
        self.code = code

    def __str__(self) -> str:
        """Returns a string representation of the error, including the code if present.

        Returns:
            str: Error message, optionally with code information.
        """
        s = super().__str__()

        return f"{s} (code: {self.code})" if self.code else s


class PreconditionError(TsirelsonError):
    """Raised when the inputs of an operation violate its pre-conditions."""

    def __init__(self, message: str = None, code: int | None = 1, witness: Any = None):
        """Initializes the PreconditionError with an optional message, code and witness.

        :param message: (str, optional):     Error message. If empty or None, defaults to "Precondition violated".
        :param code: (int | None, optional): Exit status, defaults to 1.
        :param witness: (Any, optional):     Data demonstrating the violation, e.g. offending coefficients.
        """
        super().__init__(message if message and message.strip() else "Precondition violated", code)
        self.witness = witness


class SizeError(TsirelsonError):
    """Raised when a support, family or oracle cap is exceeded."""

    def __init__(self, message: str = None, code: int | None = 2, cap: int | None = None):
        """Initializes the SizeError with an optional message, code and the violated cap.

        :param message: (str, optional):     Error message. If empty or None, defaults to "Size cap exceeded".
        :param code: (int | None, optional): Exit status, defaults to 2.
        :param cap: (int | None, optional):  The cap that was exceeded.
        """
        super().__init__(message if message and message.strip() else "Size cap exceeded", code)
        self.cap = cap


class CertificateError(TsirelsonError):
    """Raised when a norm certificate is malformed or violates admissibility."""

    def __init__(self, message: str = None, code: int | None = 1):
        super().__init__(message if message and message.strip() else "Invalid certificate", code)


class DomainError(TsirelsonError):
    """Raised when an iterated logarithm leaves its domain."""

    def __init__(self, message: str = None, code: int | None = 1):
        super().__init__(message if message and message.strip() else "Argument outside the domain", code)


class InputParseError(TsirelsonError):
    """Raised when an input file does not parse as the vector literal format."""

    def __init__(self, message: str = None, code: int | None = 1,
                 line: int | None = None, column: int | None = None):
        """Initializes the InputParseError with an optional message, code and position.

        :param message: (str, optional):     Error message. If empty or None, defaults to "Malformed input".
        :param code: (int | None, optional): Exit status, defaults to 1.
        :param line: (int | None, optional): 1-based line of the parse failure, if known.
        :param column: (int | None, optional): 1-based column of the parse failure, if known.
        """
        super().__init__(message if message and message.strip() else "Malformed input", code)
        self.line = line
        self.column = column


class GenerationError(TsirelsonError):
    """Raised when a random family generator exhausts its retry budget."""

    def __init__(self, message: str = None, code: int | None = 1):
        super().__init__(message if message and message.strip() else "Generation failed", code)
