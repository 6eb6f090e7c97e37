"""Error taxonomy shared by every module.

The distinction matters for the CLI exit-code contract: domain,
precondition, resource, and usage errors all map to exit code 2,
while a completed run with a failing or indeterminate check exits 1.
"""


class XpvError(Exception):
    """Base class for all toolkit errors."""


class DomainError(XpvError, ValueError):
    """Argument lies outside the mathematical domain of an operation."""


class PreconditionError(XpvError, ValueError):
    """Arguments are individually sane but violate a stated precondition,
    for example a sweep range outside a check's validity interval."""


class ResourceError(XpvError, RuntimeError):
    """Request exceeds a configured resource cap (memory, sieve size)."""


class UsageError(XpvError, ValueError):
    """Malformed request: unknown check identifier, empty grid, bad flag."""


class PrecisionError(XpvError, ArithmeticError):
    """The requested computation cannot meet its accuracy contract."""
