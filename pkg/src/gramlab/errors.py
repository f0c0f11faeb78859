"""Exception hierarchy shared by all gramlab modules."""


class GramlabError(Exception):
    """Base class for every error raised by the library."""


class DomainError(GramlabError, ValueError):
    """Argument outside the region where an operation is defined or validated."""


class NumericError(GramlabError, ArithmeticError):
    """A numerical method failed to reach its accuracy contract."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class ConfigurationError(GramlabError):
    """Invalid evaluation context or run configuration."""


class CoefficientError(GramlabError, ValueError):
    """Fourier coefficient data violates an eigenform identity or format rule."""
