"""Shared exception types.

Every guard in the library raises one of these rather than a bare
ValueError, so harness code can map failures to exit codes uniformly.
"""


class PreconditionViolated(ValueError):
    """An operation's documented precondition does not hold for the inputs."""


class GuardExceeded(ValueError):
    """Input size exceeds the guard that keeps an exact computation feasible."""


class RangeTooLarge(GuardExceeded):
    """Integer-lattice distribution range exceeds the memory guard."""


class RetryExhausted(RuntimeError):
    """Rejection sampling failed maxAttempts times.

    Signals a constants profile under which the acceptance probability is
    not bounded below, rather than bad luck.
    """


class DependentBasis(ValueError):
    """A claimed basis is linearly dependent over F_p."""


class SingularMatrix(ValueError):
    """Matrix inversion requested for a singular matrix over F_p."""


class VectorParseError(ValueError):
    """Vector file is malformed; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class EntryRangeError(VectorParseError):
    """Vector file entry outside the canonical residue range [0, p-1]."""
