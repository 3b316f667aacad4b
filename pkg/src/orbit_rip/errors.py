"""Exception types raised across the package."""


class OrbitRipError(Exception):
    """Base class for every error raised by orbit_rip."""


class InvalidOrderError(OrbitRipError, ValueError):
    pass


class InvalidArgumentError(OrbitRipError, ValueError):
    pass


class SizeError(OrbitRipError, ValueError):
    """A dimension or order cap was exceeded."""


class InfeasibleSampleError(OrbitRipError, ValueError):
    pass


class ShapeError(OrbitRipError, ValueError):
    pass


class InvalidConjugatorError(OrbitRipError, ValueError):
    pass


class GroupAxiomError(OrbitRipError):
    pass


class EnumerationBudgetError(OrbitRipError):
    """Too many supports to enumerate; lower s or n, or raise the budget."""


class DegenerateColumnError(OrbitRipError, ValueError):
    pass


class DegenerateOperatorError(OrbitRipError, ValueError):
    pass


class NumericError(OrbitRipError, ArithmeticError):
    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class ConfigError(OrbitRipError, ValueError):
    pass
