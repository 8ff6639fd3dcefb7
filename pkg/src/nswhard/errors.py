"""Exception types shared across the package."""


class FormatError(ValueError):
    """Malformed graph, instance, allocation or fraction text."""


class ValidationError(ValueError):
    """Input parses but violates a structural rule (degree, partition, mapping...)."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class BudgetExceeded(RuntimeError):
    """Search space too large for the requested exact method."""
