"""Exception hierarchy shared by every module of the package."""


class OuBoundsError(Exception):
    """Base class for all package errors."""


class ConfigError(OuBoundsError, ValueError):
    """Invalid parameter or configuration value."""


class NumericalError(OuBoundsError, ArithmeticError):
    """A numerical routine failed. ``module`` names where it happened."""

    def __init__(self, message, module="unknown"):
        super().__init__(message)
        self.module = module

    def __str__(self):
        return f"[{self.module}] {super().__str__()}"


class FactorizationError(NumericalError):
    """Cholesky or eigen-factorization of a covariance matrix failed."""


class ConvergenceError(NumericalError):
    """Root bracketing / bisection did not reach the requested tolerance."""


class RegimeError(OuBoundsError, ValueError):
    """A formula was requested outside the power regime where it is valid."""
