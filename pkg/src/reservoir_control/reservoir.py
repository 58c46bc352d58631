"""Fixed dynamical cores mapping the look-ahead reference to a state vector.

Two variants share one contract, ``update(scalar) -> state vector``:

* an echo state network (leaky tanh reservoir with random fixed weights);
* a tap-delay reservoir reading the low-pass filtered pressure of a
  simulated sealed pneumatic chamber.

A zero-dimensional :class:`NullReservoir` stands in when the feedforward model
is purely linear in the references.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, InvalidConfigError, ScalingError
from .plants import SurrogatePressureParams, SurrogatePressureState, surrogate_pressure_step

MIN_SPECTRAL_RADIUS = 1e-12


@dataclass(frozen=True, eq=False)
class EsnParams:
    """Weights and hyperparameters of an echo state network.

    ``reservoir_matrix`` is already rescaled to ``spectral_radius`` and
    ``input_layer`` already multiplied by ``input_scale``.
    """

    reservoir_matrix: np.ndarray
    input_layer: np.ndarray
    leaky_rate: float
    spectral_radius: float
    input_scale: float
    seed: int | None = None

    def __post_init__(self):
        if not 0.0 < self.leaky_rate <= 1.0:
            raise InvalidConfigError(f"leaky rate must lie in (0, 1], got {self.leaky_rate}")
        W = np.asarray(self.reservoir_matrix, dtype=float)
        w_in = np.asarray(self.input_layer, dtype=float).ravel()
        if W.ndim != 2 or W.shape[0] != W.shape[1] or W.shape[0] != w_in.size:
            raise ContractViolation(f"reservoir matrix {W.shape} and input layer ({w_in.size},) disagree")
        object.__setattr__(self, "reservoir_matrix", W)
        object.__setattr__(self, "input_layer", w_in)

    @property
    def size(self) -> int:
        return self.input_layer.size


def spectral_radius(W: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(W))))


def spectral_scale(W: np.ndarray, rho: float) -> np.ndarray:
    """Rescale ``W`` so its largest absolute eigenvalue equals ``rho``."""
    current = spectral_radius(W)
    if current < MIN_SPECTRAL_RADIUS:
        raise ScalingError(f"spectral radius {current:g} is numerically zero; cannot rescale to {rho}")
    return W * (rho / current)


def init_esn(seed: int | np.random.Generator, N: int, rho: float, input_scale: float,
             gamma: float) -> EsnParams:
    """Draw reservoir weights from U(-0.5, 0.5) and input weights from U(-1, 1).

    The reservoir matrix is rescaled to spectral radius ``rho``; the input layer
    is multiplied by ``input_scale``. Identical seeds give identical weights.
    """
    if N < 1:
        raise InvalidConfigError(f"reservoir size must be >= 1, got {N}")
    if not rho > 0:
        raise InvalidConfigError(f"spectral radius must be > 0, got {rho}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    W = rng.uniform(-0.5, 0.5, size=(N, N))
    w_in = rng.uniform(-1.0, 1.0, size=N) * input_scale
    return EsnParams(spectral_scale(W, rho), w_in, gamma, rho, input_scale,
                     seed if not isinstance(seed, np.random.Generator) else None)


def esn_update(x: np.ndarray, params: EsnParams, u: float) -> np.ndarray:
    """One leaky-integrator step: ``(1-g) x + g tanh(W x + w_in u)``."""
    if x.shape != (params.size,):
        raise ContractViolation(f"state shape {x.shape} does not match reservoir size {params.size}")
    g = params.leaky_rate
    return (1.0 - g) * x + g * np.tanh(params.reservoir_matrix @ x + params.input_layer * u)


def washout(x: np.ndarray, params: EsnParams, steps: int = 100) -> np.ndarray:
    """Run ``steps`` zero-input updates to forget the initial state."""
    if steps < 0:
        raise InvalidConfigError(f"washout steps must be >= 0, got {steps}")
    for _ in range(steps):
        x = esn_update(x, params, 0.0)
    return x


@dataclass(frozen=True)
class TapDelayParams:
    tap_size: int = 5
    conversion_factor: float = 7.0      # kPa per output unit
    filter_factor: float = 0.01
    surrogate: SurrogatePressureParams = field(default_factory=SurrogatePressureParams)
    tau: float = 5e-3

    def __post_init__(self):
        if self.tap_size < 1:
            raise InvalidConfigError(f"tap size must be >= 1, got {self.tap_size}")
        if not 0.0 < self.filter_factor <= 1.0:
            raise InvalidConfigError(f"filter factor must lie in (0, 1], got {self.filter_factor}")
        if not self.tau > 0:
            raise InvalidConfigError(f"tick interval tau must be > 0, got {self.tau}")


def tap_delay_update(x: np.ndarray, params: TapDelayParams, surrogate: SurrogatePressureState,
                     u: float) -> tuple[np.ndarray, SurrogatePressureState]:
    """Drive the chamber with ``K_in * u`` and shift the filtered readout in.

    ``x[0]`` is the newest filtered pressure and doubles as the previous
    filter output.
    """
    if x.shape != (params.tap_size,):
        raise ContractViolation(f"tap buffer shape {x.shape} does not match tap size {params.tap_size}")
    p_in = params.conversion_factor * u
    surrogate = surrogate_pressure_step(surrogate, p_in, params.tau, params.surrogate)
    eps = params.filter_factor
    filtered = eps * surrogate.pressure + (1.0 - eps) * x[0]
    x_next = np.empty_like(x)
    x_next[0] = filtered
    x_next[1:] = x[:-1]
    return x_next, surrogate


# -- stateful reservoirs used by the episode loop ---------------------------

class EsnReservoir:
    """Echo state network with its current state.

    The state starts from a U(-1, 1) draw and is washed out with zero input.
    """

    def __init__(self, params: EsnParams, rng=None, washout_steps: int = 100,
                 initial_state: np.ndarray | None = None):
        self.params = params
        if initial_state is None:
            rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
            initial_state = rng.uniform(-1.0, 1.0, size=params.size)
        self.state = washout(np.array(initial_state, dtype=float), params, washout_steps)

    @property
    def size(self) -> int:
        return self.params.size

    def update(self, u: float) -> np.ndarray:
        self.state = esn_update(self.state, self.params, u)
        return self.state


class TapDelayReservoir:
    """Surrogate physical reservoir with an ``n_u``-long tap buffer, newest first."""

    def __init__(self, params: TapDelayParams):
        self.params = params
        self.state = np.zeros(params.tap_size)
        self.surrogate = SurrogatePressureState()

    @property
    def size(self) -> int:
        return self.params.tap_size

    def update(self, u: float) -> np.ndarray:
        self.state, self.surrogate = tap_delay_update(self.state, self.params, self.surrogate, u)
        return self.state


class NullReservoir:
    """Empty state; the feedforward model then sees only the reference window."""

    size = 0

    def __init__(self):
        self.state = np.zeros(0)

    def update(self, u: float) -> np.ndarray:
        return self.state
