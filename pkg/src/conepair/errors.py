"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: ValidationError and SpecSyntaxError
exit with 2, MarginError with 3.  Budget exhaustion is *not* an error;
operations report it in-band (Unknown / Overflow verdicts).
"""


class ConePairError(Exception):
    """Base class for all package errors."""


class SpecSyntaxError(ConePairError):
    """Malformed spec document.  Carries line/column of the offending token."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)


class ValidationError(ConePairError):
    """Semantically invalid input: bad parameters, invariant violations."""


class MarginError(ConePairError):
    """A truncated object is too small for the requested operation."""


class BallCapError(ConePairError):
    """Ball enumeration exceeded the configured element cap."""


class UnsupportedBackendError(ValidationError):
    """Operation requires exactness the backend cannot provide."""
