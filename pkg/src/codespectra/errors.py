"""Exception types shared across the package."""


class BudgetExceededError(RuntimeError):
    """An exhaustive computation would exceed its enumeration budget."""


class CodeConstructionError(ValueError):
    """A generator matrix or built-in code failed its construction checks."""


class SpectralError(ArithmeticError):
    """Eigenvalue computation failed or produced an inconsistent spectrum."""
