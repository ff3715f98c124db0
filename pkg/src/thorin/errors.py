"""Exception types shared across the package."""


class ThorinError(Exception):
    """Base class for all package errors."""


class DomainError(ThorinError):
    """Argument outside the mathematical domain of a function."""


class DivergenceError(ThorinError):
    """An integral transform does not converge at the requested point."""


class PreconditionError(ThorinError):
    """A structural precondition of an operation is violated."""


class NumericalError(ThorinError):
    """A numerical routine failed to reach its accuracy target."""


class ModelFormatError(ThorinError):
    """A model document does not conform to the JSON schema."""

    def __init__(self, message, errors=None):
        super().__init__(message)
        self.errors = list(errors) if errors else [message]
