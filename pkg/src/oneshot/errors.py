"""Exception hierarchy. Every error raised by the library derives from OneShotError."""


class OneShotError(ValueError):
    pass


class ValidationError(OneShotError):
    """A distribution, joint or channel violates its invariants."""


class NegativeMass(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class DuplicateLabel(ValidationError):
    pass


class LabelMismatch(ValidationError):
    pass


class ZeroConditioningEvent(OneShotError):
    pass


class InvalidEpsilon(ValidationError):
    pass


class InvalidEpsilonBudget(OneShotError):
    """An epsilon split violates the preconditions of a bound."""


class InvalidParameter(ValidationError):
    pass


class UnknownSymbol(OneShotError):
    pass


class EmptyCode(OneShotError):
    """Expurgation removed every codeword."""


class OutputTooLong(OneShotError):
    pass


class BudgetExceeded(OneShotError):
    """An exhaustive oracle was asked for more work than its budget allows."""
