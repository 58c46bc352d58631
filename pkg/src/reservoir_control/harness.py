"""Episode and batch orchestration, metrics and trace persistence."""

from __future__ import annotations

import csv
import json
import math
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import __version__
from .config import ScenarioConfig, validate
from .controller import ControlFrame, ControlLoop, PdGains, SaturationMode
from .errors import InvalidConfigError, LearnerDivergedError, PlantDivergedError
from .learner import rls_init
from .plants import (BenchmarkPlant, BoucWen, NoiseModel, SurrogateActuator, SurrogateActuatorParams,
                     SurrogatePressureParams)
from .reservoir import EsnReservoir, NullReservoir, TapDelayParams, TapDelayReservoir, init_esn
from .signals import (ReferenceSignal, complex_preset, generate_complex, generate_sine,
                      generate_step)

# Sub-stream ids; each episode seed spawns one independent generator per name.
STREAMS = {"reservoir": 0, "noise": 1}

TRACE_COLUMNS = ("k", "t_seconds", "y_ref", "y_true", "y_measured", "u_ff", "u_fb", "u_raw",
                 "u_applied", "err_feedback")
LEARNER_COLUMNS = ("learner_error", "weight_norm")
SUMMARY_COLUMNS = ("k", "t_seconds", "mean_y", "std_y", "mean_err", "std_err")


def stream(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(STREAMS[name],)))


# -- scenario assembly ------------------------------------------------------

def build_reference(cfg: ScenarioConfig) -> ReferenceSignal:
    ref, tau, n = cfg.reference, cfg.scenario.tau, cfg.scenario.length
    if ref.kind == "step":
        return generate_step(ref.amplitude, ref.onset_tick, n, tau)
    if ref.kind == "sine":
        return generate_sine(ref.offset, ref.amplitude, ref.freq_hz, tau, n, ref.phase)
    comps = ref.components if ref.components is not None else complex_preset(ref.offset, ref.amplitude)
    return generate_complex(comps, tau, n)


def build_reservoir(cfg: ScenarioConfig, seed: int):
    variant = cfg.scenario.controller
    if variant == "esn+pd":
        e = cfg.esn
        rng = stream(seed, "reservoir")
        params = init_esn(rng, e.size, e.spectral_radius, e.input_scale, e.leaky_rate)
        return EsnReservoir(params, rng=rng, washout_steps=e.washout)
    if variant == "prc+pd":
        p, t = cfg.pressure, cfg.tap_delay
        surrogate = SurrogatePressureParams(p.t_r, p.c_h, p.base, p.gain, p.scale,
                                            BoucWen(p.bw_a, p.bw_beta, p.bw_gamma))
        return TapDelayReservoir(TapDelayParams(t.tap_size, t.conversion_factor, t.filter_factor,
                                                surrogate, cfg.scenario.tau))
    return NullReservoir()


def build_plant(cfg: ScenarioConfig):
    if cfg.scenario.plant == "benchmark":
        return BenchmarkPlant()
    a = cfg.actuator
    return SurrogateActuator(SurrogateActuatorParams(
        a.t_lag, a.c_h, a.full_angle, a.max_pressure, a.exponent, a.angle_min, a.angle_max,
        BoucWen(a.bw_a, a.bw_beta, a.bw_gamma)))


def build_loop(cfg: ScenarioConfig, seed: int) -> ControlLoop:
    """Assemble the closed loop for one seeded episode."""
    validate(cfg)
    s, lrn = cfg.scenario, cfg.learner
    reservoir = build_reservoir(cfg, seed)
    learner = None
    if s.controller != "pd":
        learner = rls_init(reservoir.size, lrn.horizon, lrn.learning_rate, lrn.forgetting_factor)
    sat = cfg.saturation
    saturation = SaturationMode.clamp(sat.lo, sat.hi) if sat.mode == "clamp" else SaturationMode.none()
    return ControlLoop(
        reference=build_reference(cfg), plant=build_plant(cfg), reservoir=reservoir, learner=learner,
        gains=PdGains(cfg.feedback.kp, cfg.feedback.kd, s.tau), saturation=saturation,
        noise=NoiseModel(s.noise_std, stream(seed, "noise")), delta=lrn.horizon)


# -- episodes ---------------------------------------------------------------

@dataclass(eq=False)
class EpisodeTrace:
    """Column-wise record of one episode.

    ``columns`` maps each name in :data:`TRACE_COLUMNS` plus
    :data:`LEARNER_COLUMNS` to an array with one entry per completed tick.
    """

    columns: dict[str, np.ndarray]
    fingerprint: str
    seed: int
    length: int
    tau: float
    status: str = "completed"
    diverged_tick: int | None = None
    message: str = ""
    states: np.ndarray | None = None

    def __len__(self) -> int:
        return self.columns["k"].size

    @property
    def completed(self) -> bool:
        return self.status == "completed"

    def error(self, output: str = "measured") -> np.ndarray:
        y = self.columns["y_measured" if output == "measured" else "y_true"]
        return self.columns["y_ref"] - y

    def frames(self) -> list[ControlFrame]:
        c = self.columns
        empty = np.zeros(0)
        return [
            ControlFrame(k=int(c["k"][i]), y_ref=c["y_ref"][i], y_true=c["y_true"][i],
                         y_measured=c["y_measured"][i], u_ff=c["u_ff"][i], u_fb=c["u_fb"][i],
                         u_raw=c["u_raw"][i], u_applied=c["u_applied"][i],
                         err_feedback=c["err_feedback"][i],
                         state=self.states[i] if self.states is not None else empty,
                         learner_error=c["learner_error"][i], weight_norm=c["weight_norm"][i])
            for i in range(len(self))
        ]


_FRAME_FIELDS = ("y_ref", "y_true", "y_measured", "u_ff", "u_fb", "u_raw", "u_applied",
                 "err_feedback", "learner_error", "weight_norm")


def run_episode(cfg: ScenarioConfig, seed: int, keep_states: bool = False) -> EpisodeTrace:
    """Run one episode. Divergence ends the episode and is recorded in ``status``."""
    loop = build_loop(cfg, seed)
    n = cfg.scenario.length
    cols = {name: np.zeros(n) for name in _FRAME_FIELDS}
    states = np.zeros((n, loop.reservoir.size)) if keep_states else None
    status, tick, message = "completed", None, ""
    k = 0
    try:
        for k in range(n):
            f = loop.tick()
            cols["y_ref"][k] = f.y_ref
            cols["y_true"][k] = f.y_true
            cols["y_measured"][k] = f.y_measured
            cols["u_ff"][k] = f.u_ff
            cols["u_fb"][k] = f.u_fb
            cols["u_raw"][k] = f.u_raw
            cols["u_applied"][k] = f.u_applied
            cols["err_feedback"][k] = f.err_feedback
            cols["learner_error"][k] = f.learner_error
            cols["weight_norm"][k] = f.weight_norm
            if states is not None:
                states[k] = f.state
        else:
            k = n
    except (PlantDivergedError, LearnerDivergedError) as exc:
        status, tick, message = "diverged", exc.tick, str(exc)
    done = k
    cols = {name: arr[:done] for name, arr in cols.items()}
    cols["k"] = np.arange(done)
    cols["t_seconds"] = cols["k"] * cfg.scenario.tau
    return EpisodeTrace(cols, cfg.fingerprint(), seed, n, cfg.scenario.tau, status, tick, message,
                        None if states is None else states[:done])


def rmse(trace: EpisodeTrace, skip_ticks: int = 0, output: str = "measured") -> float:
    """Root-mean-square tracking error over the frames after ``skip_ticks``.

    ``output`` selects the measured (noisy) or the true plant output.
    """
    if output not in ("measured", "true"):
        raise InvalidConfigError(f"output must be 'measured' or 'true', got {output!r}")
    err = trace.error(output)[skip_ticks:]
    if skip_ticks < 0 or err.size == 0:
        raise InvalidConfigError(f"no frames left after skipping {skip_ticks} of {len(trace)}")
    return float(np.sqrt(np.mean(err ** 2)))


# -- batches ----------------------------------------------------------------

@dataclass(eq=False)
class BatchSummary:
    """Per-tick statistics across completed seeds (population std) and per-seed RMSE."""

    seeds: list[int]
    completed_seeds: list[int]
    rmse: list[float]
    per_tick_mean_y: np.ndarray
    per_tick_std_y: np.ndarray
    per_tick_mean_err: np.ndarray
    per_tick_std_err: np.ndarray
    per_tick_mean_abs_err: np.ndarray
    skipped_ticks: int
    output: str
    tau: float
    fingerprint: str
    diverged: dict[int, str] = field(default_factory=dict)
    metrics: dict[str, list[float]] = field(default_factory=dict)

    @property
    def n_completed(self) -> int:
        return len(self.completed_seeds)

    @property
    def mean_rmse(self) -> float:
        return float(np.mean(self.rmse)) if self.rmse else math.nan

    @property
    def std_rmse(self) -> float:
        return float(np.std(self.rmse)) if self.rmse else math.nan


def _episode_job(args):
    cfg, seed = args
    return run_episode(cfg, seed)


def summarize(cfg: ScenarioConfig, traces: Iterable[EpisodeTrace],
              metrics: Mapping[str, Callable[[EpisodeTrace], float]] | None = None) -> BatchSummary:
    """Aggregate traces in seed order, so the result ignores execution order."""
    traces = sorted(traces, key=lambda t: t.seed)
    skip, output = cfg.scenario.skip_ticks, cfg.scenario.metric_output
    done = [t for t in traces if t.completed]
    y_key = "y_measured" if output == "measured" else "y_true"
    if done:
        ys = np.stack([t.columns[y_key] for t in done])
        errs = np.stack([t.error(output) for t in done])
        stats = (ys.mean(0), ys.std(0), errs.mean(0), errs.std(0), np.abs(errs).mean(0))
    else:
        stats = tuple(np.zeros(0) for _ in range(5))
    metrics = metrics or {}
    return BatchSummary(
        seeds=[t.seed for t in traces], completed_seeds=[t.seed for t in done],
        rmse=[rmse(t, skip, output) for t in done], per_tick_mean_y=stats[0], per_tick_std_y=stats[1],
        per_tick_mean_err=stats[2], per_tick_std_err=stats[3], per_tick_mean_abs_err=stats[4],
        skipped_ticks=skip, output=output, tau=cfg.scenario.tau, fingerprint=cfg.fingerprint(),
        diverged={t.seed: t.message for t in traces if not t.completed},
        metrics={name: [float(fn(t)) for t in done] for name, fn in metrics.items()},
    )


def run_batch(cfg: ScenarioConfig, n_seeds: int = 100, base_seed: int = 0, workers: int = 1,
              metrics: Mapping[str, Callable[[EpisodeTrace], float]] | None = None) -> BatchSummary:
    """Run seeds ``base_seed .. base_seed + n_seeds - 1`` and aggregate.

    ``metrics`` maps names to per-trace scalar functions evaluated on every
    completed episode before its trace is released.
    """
    if n_seeds < 1:
        raise InvalidConfigError(f"n_seeds must be >= 1, got {n_seeds}")
    validate(cfg)
    seeds = range(base_seed, base_seed + n_seeds)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(_episode_job, [(cfg, s) for s in seeds]))
    else:
        traces = [run_episode(cfg, s) for s in seeds]
    return summarize(cfg, traces, metrics)


def compare_variants(cfg: ScenarioConfig, variants: Sequence[str], n_seeds: int = 100, base_seed: int = 0,
                     baseline: str = "linear+pd", workers: int = 1) -> list[dict]:
    """Run each controller variant on identical seeds and tabulate RMSE.

    ``improvement_pct`` is the relative RMSE reduction against ``baseline``
    (NaN when the baseline is not among ``variants``).
    """
    if len(variants) < 2:
        raise InvalidConfigError("compare needs at least two variants")
    summaries = {}
    for v in variants:
        if v not in summaries:
            summaries[v] = run_batch(cfg.with_overrides(scenario={"controller": v}), n_seeds, base_seed, workers)
    base = summaries[baseline].mean_rmse if baseline in summaries else math.nan
    rows = []
    for v in variants:
        s = summaries[v]
        rows.append({"variant": v, "mean_rmse": s.mean_rmse, "std_rmse": s.std_rmse,
                     "completed": s.n_completed, "diverged": len(s.diverged),
                     "improvement_pct": 100.0 * (base - s.mean_rmse) / base})
    return rows


# -- persistence ------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def write_trace_csv(trace: EpisodeTrace, path: str | Path, learner_columns: bool = False) -> Path:
    path = Path(path)
    names = TRACE_COLUMNS + (LEARNER_COLUMNS if learner_columns else ())
    cols = [trace.columns[n] for n in names]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for i in range(len(trace)):
            w.writerow([str(i) if n == "k" else _fmt(c[i]) for n, c in zip(names, cols)])
    return path


def write_summary_csv(summary: BatchSummary, path: str | Path) -> Path:
    path = Path(path)
    n = summary.per_tick_mean_y.size
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for k in range(n):
            w.writerow([str(k), _fmt(k * summary.tau), _fmt(summary.per_tick_mean_y[k]),
                        _fmt(summary.per_tick_std_y[k]), _fmt(summary.per_tick_mean_err[k]),
                        _fmt(summary.per_tick_std_err[k])])
    return path


def write_rmse_csv(summary: BatchSummary, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("seed", "rmse"))
        for seed, value in zip(summary.completed_seeds, summary.rmse):
            w.writerow((seed, _fmt(value)))
    return path


def write_metadata(path: str | Path, cfg: ScenarioConfig, seeds: Sequence[int],
                   divergence: Mapping[int, str] | None = None, **extra) -> Path:
    """JSON sidecar with the resolved config, seeds, versions and divergence report."""
    path = Path(path)
    doc = {
        "fingerprint": cfg.fingerprint(),
        "config": cfg.to_dict(),
        "seeds": list(seeds),
        "rng_streams": STREAMS,
        "versions": {"reservoir_control": __version__, "numpy": np.__version__,
                     "python": platform.python_version()},
        "divergence": {str(k): v for k, v in (divergence or {}).items()},
    }
    doc.update(extra)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path
