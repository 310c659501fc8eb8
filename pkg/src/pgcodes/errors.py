"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid geometry or field parameters (non-prime p, k out of range, ...)."""


class BudgetExceeded(RuntimeError):
    """A requested enumeration would exceed its configured size budget."""
