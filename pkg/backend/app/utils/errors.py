class BoxcertError(Exception):
    """
    Base error of the toolkit.

    Every error carries the process exit code the CLI maps it to and a short
    machine-parseable reason token.
    """

    exit_code = 2
    reason = "error"

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    def one_line(self) -> str:
        """Single line suitable for stderr: ``error: <reason>: <detail>``."""
        detail = " ".join(str(self.detail).split())
        return f"error: {self.reason}: {detail}"


class InvalidInputError(BoxcertError):
    """A precondition on an operation's input does not hold."""

    exit_code = 2
    reason = "invalid-input"


class UsageError(BoxcertError):
    exit_code = 2
    reason = "usage"


class ParseError(BoxcertError):
    """A text file does not follow its format."""

    exit_code = 2
    reason = "parse-error"

    def __init__(self, detail: str, line: int = None):
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail)
        self.line = line


class VerificationError(BoxcertError):
    """A representation, realizer or family failed its independent check."""

    exit_code = 1
    reason = "verification-failed"

    def __init__(self, detail: str, witness=None):
        super().__init__(detail)
        self.witness = witness


class SizeLimitError(BoxcertError):
    """An instance exceeds a configured size limit."""

    exit_code = 3
    reason = "size-limit"

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what} has size {size}, limit is {limit}")
        self.size = size
        self.limit = limit


class NotFoundError(BoxcertError):
    """A randomised or exhaustive search ended without a result."""

    exit_code = 4
    reason = "not-found"

    def __init__(self, detail: str, attempts: int = 0):
        super().__init__(detail)
        self.attempts = attempts
