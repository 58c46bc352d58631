# %% [markdown]
# # Tracking on the benchmark plant
#
# ``y[k+1] = y[k] / (1 + y[k]^2) + u[k]^3`` with sensor noise of standard
# deviation 0.1. Three controllers share the same seeds: reservoir
# feedforward plus PD, linear feedforward plus PD, and incremental PD alone.
# A handful of seeds keeps this quick; the acceptance suite runs 100.

# %%
from pathlib import Path

from reservoir_control import profile_config, run_batch
from reservoir_control.harness import write_summary_csv

N_SEEDS = 5
out = Path("demo_out")
out.mkdir(exist_ok=True)

# %% [markdown]
# ## Sine reference, low feedback gains

# %%
sine = profile_config("sim-paper", reference={"kind": "sine", "amplitude": 1.0, "freq_hz": 0.1})
for variant in ("esn+pd", "linear+pd", "pd"):
    s = run_batch(sine.with_overrides(scenario={"controller": variant}), N_SEEDS)
    early = s.per_tick_mean_abs_err[:1000].mean()
    late = s.per_tick_mean_abs_err[5000:6000].mean()
    print(f"{variant:10s} RMSE {s.mean_rmse:.4f} +/- {s.std_rmse:.4f}   |err| first 1000 {early:.3f}, "
          f"ticks 5000-6000 {late:.3f}")
    write_summary_csv(s, out / f"sine_{variant.replace('+', '_')}.csv")

# %% [markdown]
# ## Step reference

# %%
step = profile_config("sim-paper", reference={"kind": "step", "amplitude": 1.0, "onset_tick": 500},
                      scenario={"length": 10000})
for variant in ("esn+pd", "linear+pd", "pd"):
    s = run_batch(step.with_overrides(scenario={"controller": variant}), N_SEEDS)
    print(f"{variant:10s} final-1000 mean |err| {s.per_tick_mean_abs_err[-1000:].mean():.4f}")

# %% [markdown]
# ## Complex reference with the higher PD gains
# The PD controller alone now comes close to the linear feedforward.

# %%
cx = profile_config("sim-opt-pd", reference={"kind": "complex", "offset": 2.0, "amplitude": 1.0})
for variant in ("esn+pd", "linear+pd", "pd"):
    s = run_batch(cx.with_overrides(scenario={"controller": variant}), N_SEEDS)
    print(f"{variant:10s} RMSE {s.mean_rmse:.4f}")
