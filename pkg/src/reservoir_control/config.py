"""Scenario configuration: built-in profiles, INI parsing and validation.

A scenario file is an INI document. Every section is optional except
``[reference]``; missing keys fall back to the selected profile::

    [scenario]
    profile = sim-paper
    controller = esn+pd

    [reference]
    kind = sine
    amplitude = 1.0
    freq_hz = 0.1
"""

from __future__ import annotations

import configparser
import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .controller import VARIANTS
from .errors import InvalidConfigError

PLANTS = ("benchmark", "surrogate_actuator")
REFERENCE_KINDS = ("step", "sine", "complex")
METRIC_OUTPUTS = ("true", "measured")


@dataclass(frozen=True)
class ScenarioSection:
    profile: str = "sim-paper"
    plant: str = "benchmark"
    controller: str = "esn+pd"
    length: int = 20000
    tau: float = 5e-3
    noise_std: float = 0.1
    skip_ticks: int = 1000
    metric_output: str = "true"


@dataclass(frozen=True)
class ReferenceSection:
    """Reference preset. ``components`` of ``None`` selects the three-tone preset
    scaled by ``offset`` and ``amplitude``."""

    kind: str = "sine"
    offset: float = 0.0
    amplitude: float = 1.0
    freq_hz: float = 0.1
    phase: float = 0.0
    onset_tick: int = 0
    components: tuple[tuple[float, float, float, float], ...] | None = None


@dataclass(frozen=True)
class EsnSection:
    size: int = 50
    leaky_rate: float = 0.8
    spectral_radius: float = 0.8
    input_scale: float = 1.0
    washout: int = 100


@dataclass(frozen=True)
class TapDelaySection:
    tap_size: int = 5
    conversion_factor: float = 7.0
    filter_factor: float = 0.01


@dataclass(frozen=True)
class LearnerSection:
    learning_rate: float = 1.0
    forgetting_factor: float = 1.0 - 1e-6
    horizon: int = 5


@dataclass(frozen=True)
class FeedbackSection:
    kp: float = 1e-4
    kd: float = 1e-6


@dataclass(frozen=True)
class SaturationSection:
    mode: str = "none"
    lo: float = 0.0
    hi: float = 400.0


@dataclass(frozen=True)
class ActuatorSection:
    t_lag: float = 0.15
    c_h: float = 6.0
    full_angle: float = 60.0
    max_pressure: float = 400.0
    exponent: float = 1.2
    angle_min: float = 0.0
    angle_max: float = 70.0
    bw_a: float = 1.0
    bw_beta: float = 0.5
    bw_gamma: float = 0.5


@dataclass(frozen=True)
class PressureSection:
    t_r: float = 0.1
    c_h: float = 10.0
    base: float = 100.0
    gain: float = 80.0
    scale: float = 200.0
    bw_a: float = 1.0
    bw_beta: float = 0.5
    bw_gamma: float = 0.5


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: ScenarioSection = field(default_factory=ScenarioSection)
    reference: ReferenceSection = field(default_factory=ReferenceSection)
    esn: EsnSection = field(default_factory=EsnSection)
    tap_delay: TapDelaySection = field(default_factory=TapDelaySection)
    learner: LearnerSection = field(default_factory=LearnerSection)
    feedback: FeedbackSection = field(default_factory=FeedbackSection)
    saturation: SaturationSection = field(default_factory=SaturationSection)
    actuator: ActuatorSection = field(default_factory=ActuatorSection)
    pressure: PressureSection = field(default_factory=PressureSection)

    def to_dict(self) -> dict[str, dict[str, Any]]:
        return dataclasses.asdict(self)

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def with_overrides(self, **sections: Mapping[str, Any]) -> "ScenarioConfig":
        """Copy with ``section={key: value}`` replacements applied, then validated."""
        return validate(_merge(self, sections))

    @property
    def variant(self) -> str:
        return self.scenario.controller


SECTIONS = {f.name: f.default_factory for f in dataclasses.fields(ScenarioConfig)}

PROFILES: dict[str, dict[str, dict[str, Any]]] = {
    "sim-paper": {},
    "sim-opt-pd": {"feedback": {"kp": 1e-2, "kd": 1e-4}},
    "surrogate-paper": {
        "scenario": {"plant": "surrogate_actuator", "controller": "prc+pd", "length": 12000,
                     "noise_std": 0.1, "skip_ticks": 2000, "metric_output": "measured"},
        "learner": {"horizon": 50},
        "feedback": {"kp": 1e-2, "kd": 1e-4},
        "saturation": {"mode": "clamp", "lo": 0.0, "hi": 400.0},
    },
}


def _merge(cfg: ScenarioConfig, sections: Mapping[str, Mapping[str, Any]]) -> ScenarioConfig:
    updates = {}
    for name, values in sections.items():
        if name not in SECTIONS:
            raise InvalidConfigError(f"unknown section [{name}]")
        current = getattr(cfg, name)
        known = {f.name for f in dataclasses.fields(current)}
        for key in values:
            if key not in known:
                raise InvalidConfigError(f"{name}.{key}: unknown field")
        updates[name] = dataclasses.replace(current, **values)
    return dataclasses.replace(cfg, **updates)


def profile_config(name: str = "sim-paper", **sections: Mapping[str, Any]) -> ScenarioConfig:
    """Resolve a built-in profile, apply section overrides and validate."""
    if name not in PROFILES:
        raise InvalidConfigError(f"scenario.profile: unknown profile {name!r}; choose from {sorted(PROFILES)}")
    base = _merge(ScenarioConfig(), PROFILES[name])
    base = _merge(base, {"scenario": {"profile": name}})
    return validate(_merge(base, sections))


# -- validation -------------------------------------------------------------

def _require(ok: bool, where: str, message: str) -> None:
    if not ok:
        raise InvalidConfigError(f"{where}: {message}")


def validate(cfg: ScenarioConfig) -> ScenarioConfig:
    """Check every field against its documented bounds; return ``cfg`` unchanged."""
    s, ref, esn, tap, lrn = cfg.scenario, cfg.reference, cfg.esn, cfg.tap_delay, cfg.learner
    _require(s.plant in PLANTS, "scenario.plant", f"must be one of {PLANTS}, got {s.plant!r}")
    _require(s.controller in VARIANTS, "scenario.controller", f"must be one of {VARIANTS}, got {s.controller!r}")
    _require(s.length >= 1, "scenario.length", f"must be >= 1, got {s.length}")
    _require(s.tau > 0, "scenario.tau", f"sampling interval must be > 0, got {s.tau}")
    _require(s.noise_std >= 0, "scenario.noise_std", f"must be >= 0, got {s.noise_std}")
    _require(0 <= s.skip_ticks < s.length, "scenario.skip_ticks",
             f"must satisfy 0 <= skip_ticks < length ({s.length}), got {s.skip_ticks}")
    _require(s.metric_output in METRIC_OUTPUTS, "scenario.metric_output",
             f"must be one of {METRIC_OUTPUTS}, got {s.metric_output!r}")

    _require(ref.kind in REFERENCE_KINDS, "reference.kind", f"must be one of {REFERENCE_KINDS}, got {ref.kind!r}")
    _require(ref.freq_hz >= 0, "reference.freq_hz", f"must be >= 0, got {ref.freq_hz}")
    if ref.kind == "step":
        _require(0 <= ref.onset_tick < s.length, "reference.onset_tick",
                 f"must satisfy 0 <= onset_tick < length, got {ref.onset_tick}")
    if ref.components is not None:
        _require(len(ref.components) >= 1, "reference.components", "needs at least one component")
        for comp in ref.components:
            _require(len(comp) == 4, "reference.components", "each component is offset, amplitude, freq_hz, phase")
            _require(comp[2] >= 0, "reference.components", f"frequency must be >= 0, got {comp[2]}")

    _require(esn.size >= 1, "esn.size", f"must be >= 1, got {esn.size}")
    _require(0 < esn.leaky_rate <= 1, "esn.leaky_rate", f"leaky rate must lie in (0, 1], got {esn.leaky_rate}")
    _require(esn.spectral_radius > 0, "esn.spectral_radius", f"must be > 0, got {esn.spectral_radius}")
    _require(esn.washout >= 0, "esn.washout", f"must be >= 0, got {esn.washout}")

    _require(tap.tap_size >= 1, "tap_delay.tap_size", f"must be >= 1, got {tap.tap_size}")
    _require(0 < tap.filter_factor <= 1, "tap_delay.filter_factor",
             f"filter factor must lie in (0, 1], got {tap.filter_factor}")

    _require(lrn.learning_rate > 0, "learner.learning_rate", f"must be > 0, got {lrn.learning_rate}")
    _require(0 < lrn.forgetting_factor <= 1, "learner.forgetting_factor",
             f"must lie in (0, 1], got {lrn.forgetting_factor}")
    _require(lrn.horizon >= 1, "learner.horizon", f"must be >= 1, got {lrn.horizon}")

    _require(cfg.feedback.kp >= 0, "feedback.kp", f"must be >= 0, got {cfg.feedback.kp}")
    _require(cfg.feedback.kd >= 0, "feedback.kd", f"must be >= 0, got {cfg.feedback.kd}")

    sat = cfg.saturation
    _require(sat.mode in ("none", "clamp"), "saturation.mode", f"must be 'none' or 'clamp', got {sat.mode!r}")
    if sat.mode == "clamp":
        _require(sat.lo < sat.hi, "saturation.lo", f"requires lo < hi, got [{sat.lo}, {sat.hi}]")

    act = cfg.actuator
    _require(act.t_lag > 0, "actuator.t_lag", f"must be > 0, got {act.t_lag}")
    _require(act.max_pressure > 0, "actuator.max_pressure", f"must be > 0, got {act.max_pressure}")
    _require(act.angle_min < act.angle_max, "actuator.angle_min", "must be below actuator.angle_max")
    _require(cfg.pressure.t_r > 0, "pressure.t_r", f"must be > 0, got {cfg.pressure.t_r}")
    _require(cfg.pressure.scale > 0, "pressure.scale", f"must be > 0, got {cfg.pressure.scale}")
    return cfg


# -- INI parsing ------------------------------------------------------------

def _parse_components(text: str) -> tuple[tuple[float, float, float, float], ...]:
    comps = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        parts = [float(p) for p in chunk.split(",")]
        if len(parts) != 4:
            raise ValueError(f"component {chunk.strip()!r} needs 4 comma-separated numbers")
        comps.append(tuple(parts))
    return tuple(comps)


def _convert(section: str, key: str, text: str, default: Any) -> Any:
    try:
        if key == "components":
            return _parse_components(text)
        if isinstance(default, bool):
            return text.strip().lower() in ("1", "true", "yes", "on")
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return float(text)
        return text.strip()
    except ValueError as exc:
        raise InvalidConfigError(f"{section}.{key}: cannot parse {text!r} ({exc})") from None


def parse_config_text(text: str, profile: str | None = None, source: str = "<config>") -> ScenarioConfig:
    """Parse an INI scenario; ``profile`` overrides ``scenario.profile`` in the text."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise InvalidConfigError(f"{source}: {exc}") from None
    if not parser.has_section("reference"):
        raise InvalidConfigError(f"{source}: reference: required section [reference] is missing")

    name = profile or parser.get("scenario", "profile", fallback="sim-paper")
    if name not in PROFILES:
        raise InvalidConfigError(f"{source}: scenario.profile: unknown profile {name!r}; choose from {sorted(PROFILES)}")
    base = _merge(_merge(ScenarioConfig(), PROFILES[name]), {"scenario": {"profile": name}})

    sections: dict[str, dict[str, Any]] = {}
    for sec in parser.sections():
        if sec not in SECTIONS:
            raise InvalidConfigError(f"{source}: unknown section [{sec}]")
        defaults = getattr(base, sec)
        known = {f.name: getattr(defaults, f.name) for f in dataclasses.fields(defaults)}
        values = {}
        for key, raw in parser.items(sec):
            if key not in known:
                raise InvalidConfigError(f"{source}: {sec}.{key}: unknown field")
            if sec == "scenario" and key == "profile":
                continue
            values[key] = _convert(sec, key, raw, known[key])
        sections[sec] = values
    try:
        return validate(_merge(base, sections))
    except InvalidConfigError as exc:
        raise InvalidConfigError(f"{source}: {exc}") from None


def load_config(path: str | Path, profile: str | None = None) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidConfigError(f"{path}: cannot read config file ({exc.strerror})") from None
    return parse_config_text(text, profile=profile, source=str(path))
