"""Exception types shared by the library and mapped to CLI exit codes."""


class FewnomialError(Exception):
    pass


class ParseError(FewnomialError, ValueError):
    """Malformed input document or field (exit code 2)."""


class PreconditionError(FewnomialError, ValueError):
    """Input is well formed but an operation refuses it (exit code 3)."""


class InvariantViolation(FewnomialError, AssertionError):
    """An internal consistency check failed (exit code 4)."""
