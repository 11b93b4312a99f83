"""Exception hierarchy shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific class that applies.
"""


class ConcdimError(Exception):
    """Base class for all library errors."""


class InputError(ConcdimError):
    """Malformed or inconsistent caller input (bad matrix, bad weights, bad CSV)."""


class ResourceLimitError(ConcdimError):
    """A size limit was exceeded; the message names the limit and the fallback."""


class InvariantViolation(ConcdimError):
    """An internal consistency check failed; indicates a bug, not bad input."""
