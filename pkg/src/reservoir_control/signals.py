"""Reference trajectories and the look-ahead window fed to the controller."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidConfigError

# (offset, amplitude, freq_hz, phase)
Component = tuple[float, float, float, float]

COMPLEX_FREQS_HZ = (0.1, 0.23, 0.37)
COMPLEX_WEIGHTS = (0.5, 0.3, 0.2)
COMPLEX_PHASES = (0.0, 1.0, 2.0)


@dataclass(frozen=True)
class ReferenceSignal:
    """Sampled reference trajectory.

    Attributes
    ----------
    samples : np.ndarray
        Reference value at each tick, read-only.
    tau : float
        Tick interval in seconds.
    """

    samples: np.ndarray
    tau: float

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float).ravel()
        if samples.size < 1:
            raise InvalidConfigError("reference signal must contain at least one sample")
        if not np.all(np.isfinite(samples)):
            raise InvalidConfigError("reference signal contains non-finite samples")
        if not self.tau > 0:
            raise InvalidConfigError(f"tick interval tau must be > 0, got {self.tau}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self)) * self.tau


def _check_length(length: int) -> None:
    if length <= 0:
        raise InvalidConfigError(f"signal length must be positive, got {length}")


def generate_step(amplitude: float, onset_tick: int, length: int, tau: float = 5e-3) -> ReferenceSignal:
    """Zero before ``onset_tick``, ``amplitude`` from it onward."""
    _check_length(length)
    if not 0 <= onset_tick < length:
        raise InvalidConfigError(f"step onset must satisfy 0 <= onset_tick < length, got {onset_tick}")
    samples = np.zeros(length)
    samples[onset_tick:] = amplitude
    return ReferenceSignal(samples, tau)


def generate_sine(offset: float, amplitude: float, freq_hz: float, tau: float, length: int,
                  phase: float = 0.0) -> ReferenceSignal:
    """``offset + amplitude * sin(2*pi*freq_hz*k*tau + phase)`` for k = 0..length-1."""
    if not tau > 0:
        raise InvalidConfigError(f"tick interval tau must be > 0, got {tau}")
    if freq_hz < 0:
        raise InvalidConfigError(f"sine frequency must be >= 0, got {freq_hz}")
    _check_length(length)
    t = np.arange(length) * tau
    return ReferenceSignal(offset + amplitude * np.sin(2 * np.pi * freq_hz * t + phase), tau)


def generate_complex(components: Sequence[Component], tau: float, length: int) -> ReferenceSignal:
    """Pointwise sum of sinusoid components ``(offset, amplitude, freq_hz, phase)``."""
    if len(components) == 0:
        raise InvalidConfigError("complex reference needs at least one component")
    _check_length(length)
    total = np.zeros(length)
    for offset, amplitude, freq_hz, phase in components:
        total += generate_sine(offset, amplitude, freq_hz, tau, length, phase).samples
    return ReferenceSignal(total, tau)


def complex_preset(offset: float, amplitude: float) -> list[Component]:
    """Three-tone waveform with peak excursion ``amplitude`` around ``offset``.

    The tones sit at 0.1, 0.23 and 0.37 Hz with weights 0.5/0.3/0.2, so the
    signal never leaves ``[offset - amplitude, offset + amplitude]``.
    """
    comps = []
    for i, (f, wgt, ph) in enumerate(zip(COMPLEX_FREQS_HZ, COMPLEX_WEIGHTS, COMPLEX_PHASES)):
        comps.append((offset if i == 0 else 0.0, wgt * amplitude, f, ph))
    return comps


def future_window(signal: ReferenceSignal, k: int, delta: int) -> np.ndarray:
    """Return ``[r[k+1], ..., r[k+delta]]``, holding the last sample past the end."""
    n = len(signal)
    if not 0 <= k < n:
        raise IndexError(f"tick {k} outside signal of length {n}")
    if delta < 1:
        raise InvalidConfigError(f"horizon delta must be >= 1, got {delta}")
    idx = np.minimum(np.arange(k + 1, k + 1 + delta), n - 1)
    return signal.samples[idx]


def padded_samples(signal: ReferenceSignal, delta: int) -> np.ndarray:
    """Samples extended by ``delta`` copies of the final value.

    ``padded_samples(s, d)[k + 1:k + 1 + d]`` equals ``future_window(s, k, d)``;
    the episode loop slices this array instead of calling ``future_window``.
    """
    return np.concatenate([signal.samples, np.full(delta, signal.samples[-1])])
