class RelMarginalError(Exception):
    """Base class for all errors raised by relmarginal."""


class UnsupportedOrderError(RelMarginalError, ValueError):
    pass


class IntegrandError(RelMarginalError, ArithmeticError):
    pass


class DimensionError(RelMarginalError, ValueError):
    pass


class InvalidVelocityError(RelMarginalError, ValueError):
    pass


class ImaginaryResidualError(RelMarginalError, ArithmeticError):
    pass


class DegenerateProjectionError(RelMarginalError, ValueError):
    """Projection matrix does not have full row rank."""

    def __init__(self, message: str, smallest_singular_value: float):
        super().__init__(message)
        self.smallest_singular_value = smallest_singular_value


def check_velocity(beta: float) -> float:
    beta = float(beta)
    if not abs(beta) < 1.0:
        raise InvalidVelocityError(f"velocity parameter must satisfy |beta| < 1, got {beta!r}")
    return beta
