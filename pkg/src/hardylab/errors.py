"""Exception hierarchy shared by every hardylab module."""


class HardyLabError(Exception):
    """Base class for all hardylab errors."""


class InvalidArgumentError(HardyLabError, ValueError):
    pass


class NonIntegrableSampleError(HardyLabError, ValueError):
    """A sample vector contains NaN or infinity.

    Usually a boundary singularity landed on a quadrature node.
    """


class EvaluationUnderflowError(HardyLabError, ArithmeticError):
    pass


class BoundaryEstimationError(HardyLabError):
    """Too many grid nodes produced divergent boundary estimates."""


class GaugeUnavailableError(HardyLabError):
    pass


class BoundUnavailableError(HardyLabError):
    pass


class FactorizationUnavailableError(HardyLabError):
    pass


class SpecParseError(HardyLabError, ValueError):
    pass


class InvariantViolationError(HardyLabError):
    """A numerically checked inequality that must hold did not."""
