"""Numerical certification of eigenvalue inequalities for convex and log-convex
matrix functions, positive unital maps and matrix means."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    ConfigError,
    DomainError,
    EigineqError,
    InputError,
    NumericError,
    PreconditionError,
    SingularityError,
)
