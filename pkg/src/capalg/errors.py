"""Exception types shared across the package."""


class CapalgError(Exception):
    """Base class for all package-specific errors."""


class InvalidResolutionError(CapalgError, ValueError):
    """Chain resolution k must be a positive integer."""


class ChainMismatchError(CapalgError, ValueError):
    """Operands belong to chains of different resolution."""


class CarrierMismatchError(CapalgError, ValueError):
    """Operands are defined over different finite spaces."""


class ValidationError(CapalgError, ValueError):
    """Input data violates a structural invariant."""


class BudgetExceededError(CapalgError, RuntimeError):
    """An enumeration or search would exceed its declared size budget."""


class LawViolationError(CapalgError, ValueError):
    """A derived structure fails a required law; carries a witness."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
