"""Exception types raised by adcmem."""


class AdcMemError(Exception):
    """Base class for all adcmem errors."""


class DomainError(AdcMemError, ValueError):
    """A parameter lies outside its admissible range."""


class SizeError(AdcMemError, ValueError):
    """A dimension or use count exceeds the supported limits."""


class ContractError(AdcMemError, ValueError):
    """Inputs violate an operation's precondition (shape, hermiticity, ...)."""


class NumericError(AdcMemError, ArithmeticError):
    """An iterative routine failed to converge or an input was too large."""


class ConsistencyError(AdcMemError, RuntimeError):
    """An internal invariant was violated; indicates a formula or code bug."""
