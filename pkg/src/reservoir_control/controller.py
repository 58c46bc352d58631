"""Two-degree-of-freedom control law and the per-tick loop.

The feedforward path is a linear readout of ``[x, future references]`` whose
weights are adapted online by RLS on delayed input/output pairs; the feedback
path is an incremental PD law on the measured tracking error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, InvalidConfigError, LearnerDivergedError, PlantDivergedError
from .learner import LearnerState, rls_update, sync_weights
from .plants import NoiseModel
from .signals import ReferenceSignal, padded_samples

VARIANTS = ("esn+pd", "prc+pd", "linear+pd", "pd")


@dataclass(frozen=True)
class PdGains:
    kp: float
    kd: float
    tau: float

    def __post_init__(self):
        if self.kp < 0 or self.kd < 0:
            raise InvalidConfigError(f"PD gains must be non-negative, got kp={self.kp}, kd={self.kd}")
        if not self.tau > 0:
            raise InvalidConfigError(f"tick interval tau must be > 0, got {self.tau}")


@dataclass(frozen=True)
class SaturationMode:
    """``None`` bounds mean pass-through; otherwise clamp to ``[lo, hi]``."""

    lo: float | None = None
    hi: float | None = None

    def __post_init__(self):
        if (self.lo is None) != (self.hi is None):
            raise InvalidConfigError("saturation needs both lo and hi, or neither")
        if self.lo is not None and not self.lo < self.hi:
            raise InvalidConfigError(f"saturation requires lo < hi, got [{self.lo}, {self.hi}]")

    @classmethod
    def none(cls) -> "SaturationMode":
        return cls()

    @classmethod
    def clamp(cls, lo: float, hi: float) -> "SaturationMode":
        return cls(lo, hi)

    @property
    def is_clamp(self) -> bool:
        return self.lo is not None


def feedforward(w_control: np.ndarray, x: np.ndarray, window: np.ndarray) -> float:
    """Inner product of the control weights with ``[x, window]``."""
    r = x.size
    if w_control.size != r + window.size:
        raise ContractViolation(
            f"control weights have length {w_control.size}, expected {r} + {window.size}")
    return float(w_control[:r] @ x + w_control[r:] @ window)


def pd_feedback(e: float, e_prev: float, gains: PdGains) -> float:
    return gains.kp * e + gains.kd * (e - e_prev) / gains.tau


def combine(u_applied_prev: float, u_ff: float, u_ff_prev: float, u_fb: float) -> float:
    """Incremental combination: previous applied input plus the feedforward change plus feedback."""
    return u_applied_prev + u_ff - u_ff_prev + u_fb


def saturate(u: float, mode: SaturationMode) -> float:
    if mode.lo is None:
        return u
    return min(max(u, mode.lo), mode.hi)


class HistoryBuffers:
    """Ring buffers holding the last ``delta + 1`` states, applied inputs and measurements."""

    def __init__(self, delta: int, r: int):
        self.delta = delta
        self.capacity = delta + 1
        self.states = np.zeros((self.capacity, r))
        self.inputs = np.zeros(self.capacity)
        self.measurements = np.zeros(self.capacity)
        # ring indices of y~_{k-d+1..k}, keyed by k mod capacity
        self._window = [np.arange(j - delta + 1, j + 1) % self.capacity for j in range(self.capacity)]
        self.u_ff_prev = 0.0
        self.e_prev = 0.0
        self.u_applied_prev = 0.0

    def slot(self, k: int) -> int:
        return k % self.capacity

    def push_measurement(self, k: int, y_measured: float) -> None:
        self.measurements[k % self.capacity] = y_measured

    def push(self, k: int, x: np.ndarray, u_applied: float) -> None:
        i = k % self.capacity
        self.states[i] = x
        self.inputs[i] = u_applied

    def delayed_pair(self, k: int) -> tuple[np.ndarray, float]:
        """Regressor ``[x_{k-d}, y~_{k-d+1..k}]`` and target ``u_{k-d}``; needs ``k >= delta``."""
        if k < self.delta:
            raise IndexError(f"no delayed pair before tick {self.delta}")
        old = (k - self.delta) % self.capacity
        idx = self._window[k % self.capacity]
        return np.concatenate([self.states[old], self.measurements[idx]]), float(self.inputs[old])


@dataclass(frozen=True, eq=False)
class ControlFrame:
    k: int
    y_ref: float
    y_true: float
    y_measured: float
    u_ff: float
    u_fb: float
    u_raw: float
    u_applied: float
    err_feedback: float
    state: np.ndarray
    learner_error: float = math.nan
    weight_norm: float = 0.0


class ControlLoop:
    """Closed loop of reference, reservoir, learner, PD law and plant.

    Parameters
    ----------
    reference : ReferenceSignal
    plant
        Object with an ``output`` property and ``step(u, tau)``.
    reservoir
        Object with ``size``, ``state`` and ``update(u) -> state``.
    learner : LearnerState or None
        ``None`` removes the feedforward branch entirely (plain PD).
    gains : PdGains
    saturation : SaturationMode
    noise : NoiseModel
    delta : int
        Look-ahead horizon and learning delay in ticks.
    """

    def __init__(self, reference: ReferenceSignal, plant, reservoir, learner: LearnerState | None,
                 gains: PdGains, saturation: SaturationMode, noise: NoiseModel, delta: int):
        if delta < 1:
            raise InvalidConfigError(f"horizon delta must be >= 1, got {delta}")
        if learner is not None and learner.dim != reservoir.size + delta:
            raise ContractViolation(
                f"learner dimension {learner.dim} != reservoir size {reservoir.size} + delta {delta}")
        self.reference = reference
        self.plant = plant
        self.reservoir = reservoir
        self.learner = learner
        self.gains = gains
        self.saturation = saturation
        self.noise = noise
        self.delta = delta
        self.buffers = HistoryBuffers(delta, reservoir.size)
        self._ref = padded_samples(reference, delta)
        self.k = 0

    def tick(self) -> ControlFrame:
        k, d, buf, learner = self.k, self.delta, self.buffers, self.learner
        if k >= len(self.reference):
            raise IndexError(f"episode of length {len(self.reference)} already finished")

        y = self.plant.output
        y_meas = self.noise(y)
        buf.push_measurement(k, y_meas)

        learner_error = math.nan
        if learner is not None and k >= d:
            phi, target = buf.delayed_pair(k)
            try:
                rls_update(learner, phi, target)
            except LearnerDivergedError as exc:
                raise LearnerDivergedError(str(exc), tick=k) from exc
            sync_weights(learner)
            learner_error = learner.last_error

        x = self.reservoir.update(self._ref[k + d])

        y_ref = self._ref[k]
        if learner is None:
            u_ff = 0.0
        else:
            u_ff = feedforward(learner.w_control, x, self._ref[k + 1:k + 1 + d])
        e = y_ref - y_meas
        u_fb = pd_feedback(e, buf.e_prev, self.gains)
        u = combine(buf.u_applied_prev, u_ff, buf.u_ff_prev, u_fb)
        u_applied = saturate(u, self.saturation)

        try:
            self.plant.step(u_applied, self.gains.tau)
        except PlantDivergedError as exc:
            raise PlantDivergedError(str(exc), tick=k) from exc

        buf.push(k, x, u_applied)
        buf.u_ff_prev, buf.e_prev, buf.u_applied_prev = u_ff, e, u_applied
        self.k = k + 1
        return ControlFrame(
            k=k, y_ref=float(y_ref), y_true=y, y_measured=y_meas, u_ff=u_ff, u_fb=u_fb, u_raw=u,
            u_applied=u_applied, err_feedback=e, state=x.copy(), learner_error=learner_error,
            weight_norm=0.0 if learner is None else math.sqrt(learner.w_control @ learner.w_control),
        )
