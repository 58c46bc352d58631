"""Exception types shared across the package."""


class ReservoirControlError(Exception):
    """Base class for all package errors."""


class InvalidConfigError(ReservoirControlError, ValueError):
    """A parameter or configuration value violates its documented bounds."""


class ContractViolation(ReservoirControlError, ValueError):
    """Array dimensions do not agree with the parameters they are used with."""


class InitializationError(ReservoirControlError):
    """Random initialization produced an unusable draw."""


class ScalingError(InitializationError):
    """A matrix cannot be rescaled to a target spectral radius."""


class PlantDivergedError(ReservoirControlError):
    """The simulated plant output left the admissible range."""

    def __init__(self, message, tick=None):
        super().__init__(message if tick is None else f"tick {tick}: {message}")
        self.tick = tick


class LearnerDivergedError(ReservoirControlError):
    """The recursive least-squares update produced a non-finite value."""

    def __init__(self, message, tick=None):
        super().__init__(message if tick is None else f"tick {tick}: {message}")
        self.tick = tick
