"""Exception hierarchy shared across the package."""


class FoodChainError(Exception):
    """Base class for all errors raised by this package."""


class NonPositiveCoefficientError(FoodChainError):
    """An interaction coefficient that must be strictly positive is not."""

    def __init__(self, symbol: str, value) -> None:
        self.symbol = symbol
        self.value = value
        super().__init__(f"coefficient {symbol} must be a positive finite number, got {value!r}")


class ZeroIntracompetitionError(FoodChainError):
    """Prey self-limitation rate a(1,1) is zero; the analysis requires a(1,1) > 0."""


class DimensionMismatchError(FoodChainError):
    """Array sizes disagree with the number of species."""


class NotPositiveSemidefiniteError(FoodChainError):
    """Noise covariance has an eigenvalue below the negative tolerance."""


class IndexOutOfRangeError(FoodChainError):
    """Species or sub-chain index outside 1..n."""


class NumericalBreakdownError(FoodChainError):
    """Internal division by zero in the elimination sweep (a program bug for valid chains)."""


class SingularMatrixError(FoodChainError):
    """Dense solve failed or produced non-finite values."""


class InfeasibleBoundaryError(FoodChainError):
    """Requested boundary state has a non-positive equilibrium component."""


class EmptyTrajectoryError(FoodChainError):
    """Statistic requested on a trajectory/ensemble with no usable samples."""


class MalformedBoxError(FoodChainError):
    """Occupation box has lo >= hi on some axis or a wrong shape."""


class BlowUpError(FoodChainError):
    """A log-state exceeded the representable range of exp (numerical explosion)."""

    def __init__(self, time: float, path: int = 0) -> None:
        self.time = time
        self.path = path
        super().__init__(f"state blew up at t={time:g} (path {path})")


class ConfigError(FoodChainError):
    """Model configuration file is malformed or semantically invalid."""
