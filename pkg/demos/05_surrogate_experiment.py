# %% [markdown]
# # Surrogate actuator study
#
# The bending actuator (0 to 400 kPa, about 60 degrees at full pressure) is
# driven by the tap-delay reservoir controller, the linear feedforward and
# plain PD. RMSE uses the measured angle after the first 10 s.

# %%
from reservoir_control import compare_variants, profile_config
from reservoir_control.cli import format_table

REFERENCES = {
    "0.1 Hz sine": {"kind": "sine", "offset": 30.0, "amplitude": 20.0, "freq_hz": 0.1},
    "0.2 Hz sine": {"kind": "sine", "offset": 30.0, "amplitude": 20.0, "freq_hz": 0.2},
    "0.5 Hz sine": {"kind": "sine", "offset": 30.0, "amplitude": 5.0, "freq_hz": 0.5},
    "complex": {"kind": "complex", "offset": 30.0, "amplitude": 20.0},
}

# %%
reductions = []
for name, ref in REFERENCES.items():
    cfg = profile_config("surrogate-paper", reference=ref)
    rows = compare_variants(cfg, ["prc+pd", "linear+pd", "pd"], n_seeds=3)
    print(f"\n{name}\n{format_table(rows)}")
    reductions.append(rows[0]["improvement_pct"])

print(f"\nmean RMSE reduction of prc+pd over linear+pd: {sum(reductions) / len(reductions):.1f}%")
