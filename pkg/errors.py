"""Exception hierarchy shared by every package."""


class MMRankError(Exception):
    """Base class for all errors raised by this project."""


class ContractViolation(MMRankError, ValueError):
    """A caller broke an operation's precondition."""


class ResourceLimitError(MMRankError):
    """A configured memory or size limit was exceeded."""


class InvariantViolation(MMRankError, AssertionError):
    """An internal invariant failed; indicates a bug, not bad input."""
