"""Exception types shared by every module of the package."""


class EigineqError(Exception):
    """Base class for all package errors."""


class DomainError(EigineqError, ValueError):
    """An operand lies outside the domain an operation is defined on."""


class SingularityError(DomainError):
    """A strictly positive definite operand was required but is (numerically) singular."""


class NumericError(EigineqError, ArithmeticError):
    """An iterative or constructive numerical step broke down."""


class PreconditionError(EigineqError, ValueError):
    """A theorem check was called with a function or operand violating its hypotheses."""


class ConfigError(EigineqError, ValueError):
    """Invalid run or search configuration (unknown check name, bad ranges, ...)."""


class InputError(EigineqError, ValueError):
    """A user-supplied matrix file could not be read."""

    def __init__(self, path, reason):
        super().__init__(f"{path}: {reason}")
        self.path = path
