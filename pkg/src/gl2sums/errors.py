"""Shared exception types."""


class NotInvertibleError(ZeroDivisionError):
    """Raised when inverting a non-unit."""


class VerificationError(AssertionError):
    """A runtime-checked bound or identity failed.

    ``check`` is a short stable identifier used by the CLI failure report.
    """

    def __init__(self, check: str, detail: str = ""):
        self.check = check
        self.detail = detail
        super().__init__(f"{check}: {detail}" if detail else check)
