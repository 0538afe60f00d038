"""Exception hierarchy shared by the library and the CLI."""


class EfxLabError(Exception):
    """Base class for all library errors."""


class LimitExceededError(EfxLabError):
    """A brute-force routine was asked to enumerate more than its cap."""


class ParseError(EfxLabError, ValueError):
    """Malformed JSON instance, valuation, circuit or DSL input."""


class VerificationError(EfxLabError):
    """A post-hoc check rejected a computed result."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class ReductionError(EfxLabError):
    """A back-mapping received a solution lacking the guaranteed structure."""
