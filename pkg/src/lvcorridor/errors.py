"""Exception types shared across the package."""

__all__ = [
    "InvalidStateError",
    "NoInteriorEquilibriumError",
    "DegenerateGapError",
    "TrajectoryMismatchError",
    "IntegrationError",
    "StepSizeUnderflowError",
    "InvarianceBreachError",
    "HorizonExceededError",
    "ConvergenceLostError",
]


class InvalidStateError(ValueError):
    """A state value is non-finite or otherwise unusable."""


class NoInteriorEquilibriumError(ValueError):
    """The requested operation needs a coexistence equilibrium inside the
    unit square, which the given coefficients do not admit."""


class DegenerateGapError(ValueError):
    """The equilibrium gap is (numerically) zero, so the normalized
    deviation indicator is undefined."""


class TrajectoryMismatchError(ValueError):
    """A trajectory was produced under different parameters than the ones
    passed alongside it."""


class IntegrationError(RuntimeError):
    """Base class for solver failures."""


class StepSizeUnderflowError(IntegrationError):
    """The error controller drove the step size below the underflow floor,
    which for this smooth system indicates solver misuse."""


class InvarianceBreachError(IntegrationError):
    """An accepted state left the unit square by more than the configured
    slack. Carries the offending time and state."""

    def __init__(self, time, state):
        self.time = float(time)
        self.state = (float(state[0]), float(state[1]))
        super().__init__(
            f"state {self.state} at tau={self.time} left the unit square "
            f"beyond the invariance slack"
        )


class HorizonExceededError(IntegrationError):
    """Integration reached the horizon without the monitored condition
    occurring. Carries the closest approach achieved."""

    def __init__(self, message, closest_approach=None, at_time=None):
        self.closest_approach = closest_approach
        self.at_time = at_time
        super().__init__(message)


class ConvergenceLostError(IntegrationError):
    """The trajectory left the convergence ball again after first entry,
    so the measured first-entry time is not a convergence time."""
