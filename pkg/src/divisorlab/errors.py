"""Exception types shared across the package."""


class DivisorLabError(Exception):
    """Base class for package-specific errors."""


class DomainError(DivisorLabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedMethodError(DivisorLabError, ValueError):
    """The requested method or parameter combination is not implemented."""


class OverflowCheckError(DivisorLabError, ArithmeticError):
    """Counts would not fit the declared integer width."""


class ValidationError(DivisorLabError, RuntimeError):
    """Cross-validation between two independent computations failed."""


class InsufficientDataError(DivisorLabError, ValueError):
    """Not enough samples or points for the requested statistic."""


class CacheCorruptionError(DivisorLabError, RuntimeError):
    """A cache file failed magic/version/size/checksum verification."""


class ResourceBudgetError(DivisorLabError, RuntimeError):
    """The operation cannot proceed within the given memory budget."""


class ConfigError(DivisorLabError, ValueError):
    """Invalid experiment configuration; carries the list of violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid configuration: " + "; ".join(self.violations))
