"""Exception types shared across the package."""


class PromiseCcError(Exception):
    """Base class for all errors raised by promise_cc."""


class ParameterError(PromiseCcError, ValueError):
    """A family or protocol parameter is outside its valid range."""


class DimensionMismatch(PromiseCcError, ValueError):
    """Operands have incompatible lengths or dimensions."""


class PromiseViolation(PromiseCcError):
    """A deterministic protocol or query algorithm received an off-promise input.

    Deterministic protocols are only contracted on promise inputs, so they
    refuse instead of returning an arbitrary answer.
    """


class ReductionInputError(PromiseCcError, ValueError):
    """A DFA handed to the protocol reduction does not solve the promise problem."""


class LimitExceeded(PromiseCcError):
    """An exhaustive enumeration or exact search was requested beyond the size limit."""
