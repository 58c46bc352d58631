"""Simulated plants and the surrogate pneumatic reservoir dynamics.

Both surrogates combine a first-order lag toward a static map with a
rate-independent Bouc-Wen hysteresis variable driven by normalized input
increments. Neither is a physical model of a pneumatic muscle; they only
reproduce a saturating, hysteretic input-output relation of the right scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError, PlantDivergedError

PRESSURE_NORM_KPA = 400.0
DIVERGENCE_LIMIT = 1e6


@dataclass(frozen=True)
class BoucWen:
    a: float = 1.0
    beta: float = 0.5
    gamma: float = 0.5

    def step(self, h: float, dp: float) -> float:
        return h + self.a * dp - self.beta * abs(dp) * h - self.gamma * dp * abs(h)


# -- benchmark plant --------------------------------------------------------

@dataclass(frozen=True)
class BenchmarkPlantState:
    y: float = 0.0


def benchmark_step(state: BenchmarkPlantState, u: float) -> BenchmarkPlantState:
    """``y' = y / (1 + y^2) + u^3``."""
    y = state.y
    y_next = y / (1.0 + y * y) + u ** 3
    if not math.isfinite(y_next) or abs(y_next) > DIVERGENCE_LIMIT:
        raise PlantDivergedError(f"benchmark output {y_next!r} exceeded |y| <= {DIVERGENCE_LIMIT:g} (input {u!r})")
    return BenchmarkPlantState(y_next)


# -- surrogate bending actuator ---------------------------------------------

@dataclass(frozen=True)
class SurrogateActuatorParams:
    """Coefficients of the surrogate bending actuator.

    The static map reaches ``full_angle`` degrees at ``max_pressure`` kPa.
    """

    t_lag: float = 0.15
    c_h: float = 6.0
    full_angle: float = 60.0
    max_pressure: float = PRESSURE_NORM_KPA
    exponent: float = 1.2
    angle_min: float = 0.0
    angle_max: float = 70.0
    hysteresis: BoucWen = BoucWen()

    def validate(self) -> None:
        if not self.t_lag > 0:
            raise InvalidConfigError(f"actuator.t_lag must be > 0, got {self.t_lag}")
        if not self.max_pressure > 0:
            raise InvalidConfigError(f"actuator.max_pressure must be > 0, got {self.max_pressure}")
        if not self.angle_min < self.angle_max:
            raise InvalidConfigError("actuator.angle_min must be below actuator.angle_max")


@dataclass(frozen=True)
class SurrogateActuatorState:
    angle: float = 0.0
    h: float = 0.0
    previous_pressure: float = 0.0


def surrogate_actuator_step(state: SurrogateActuatorState, pressure: float, tau: float,
                            params: SurrogateActuatorParams = SurrogateActuatorParams()) -> SurrogateActuatorState:
    """Advance the bending actuator one tick under supply pressure ``pressure`` [kPa]."""
    p = min(max(pressure, 0.0), params.max_pressure)
    dp = (p - state.previous_pressure) / PRESSURE_NORM_KPA
    h = params.hysteresis.step(state.h, dp)
    target = params.full_angle * (p / params.max_pressure) ** params.exponent + params.c_h * h
    angle = state.angle + (tau / params.t_lag) * (target - state.angle)
    angle = min(max(angle, params.angle_min), params.angle_max)
    return SurrogateActuatorState(angle, h, p)


# -- surrogate passive-chamber pressure (physical reservoir) ----------------

@dataclass(frozen=True)
class SurrogatePressureParams:
    """Coefficients of the sealed-chamber pressure response [kPa]."""

    t_r: float = 0.1
    c_h: float = 10.0
    base: float = 100.0
    gain: float = 80.0
    scale: float = 200.0
    hysteresis: BoucWen = BoucWen()

    def validate(self) -> None:
        if not self.t_r > 0:
            raise InvalidConfigError(f"pressure.t_r must be > 0, got {self.t_r}")
        if not self.scale > 0:
            raise InvalidConfigError(f"pressure.scale must be > 0, got {self.scale}")


@dataclass(frozen=True)
class SurrogatePressureState:
    pressure: float = 100.0
    h: float = 0.0
    previous_input: float = 0.0


def surrogate_pressure_step(state: SurrogatePressureState, p_in: float, tau: float,
                            params: SurrogatePressureParams = SurrogatePressureParams()) -> SurrogatePressureState:
    """Advance the passive chamber pressure one tick under active pressure ``p_in``."""
    p_in = max(p_in, 0.0)
    dp = (p_in - state.previous_input) / PRESSURE_NORM_KPA
    h = params.hysteresis.step(state.h, dp)
    target = params.base + params.gain * math.tanh(p_in / params.scale) + params.c_h * h
    p_out = state.pressure + (tau / params.t_r) * (target - state.pressure)
    return SurrogatePressureState(max(p_out, 0.0), h, p_in)


# -- plant wrappers used by the episode loop --------------------------------

class BenchmarkPlant:
    """Stateful wrapper around :func:`benchmark_step`."""

    def __init__(self, y0: float = 0.0):
        self.state = BenchmarkPlantState(y0)

    @property
    def output(self) -> float:
        return self.state.y

    def step(self, u: float, tau: float) -> None:
        self.state = benchmark_step(self.state, u)


class SurrogateActuator:
    """Stateful wrapper around :func:`surrogate_actuator_step`."""

    def __init__(self, params: SurrogateActuatorParams = SurrogateActuatorParams()):
        self.params = params
        self.state = SurrogateActuatorState()

    @property
    def output(self) -> float:
        return self.state.angle

    def step(self, u: float, tau: float) -> None:
        self.state = surrogate_actuator_step(self.state, u, tau, self.params)


# -- sensor noise -----------------------------------------------------------

class NoiseModel:
    """Additive Gaussian sensor noise drawn from a dedicated generator.

    Parameters
    ----------
    std_dev : float
        Standard deviation in output units; 0 disables noise.
    rng : int or numpy.random.Generator
        Seed or generator for the noise stream.
    """

    def __init__(self, std_dev: float, rng=None):
        if not std_dev >= 0:
            raise InvalidConfigError(f"noise standard deviation must be >= 0, got {std_dev}")
        self.std_dev = float(std_dev)
        self.rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)

    def __call__(self, y: float) -> float:
        return add_noise(y, self)


def add_noise(y: float, model: NoiseModel) -> float:
    """Return ``y`` plus one Gaussian draw; exactly ``y`` when the model is silent."""
    if model.std_dev == 0.0:
        return y
    return y + model.rng.normal(0.0, model.std_dev)
