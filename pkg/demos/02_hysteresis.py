# %% [markdown]
# # Surrogate hysteresis
#
# Both surrogates (bending actuator and passive chamber) carry a Bouc-Wen
# variable, so rising and falling sweeps trace different curves.

# %%
import numpy as np

from reservoir_control import (SurrogateActuatorState, SurrogatePressureState, surrogate_actuator_step,
                               surrogate_pressure_step)

TAU = 5e-3
sweep = np.concatenate([np.linspace(0, 400, 2000), np.linspace(400, 0, 2000)])

# %%
act, prs = SurrogateActuatorState(), SurrogatePressureState()
angles, pressures = [], []
for p in sweep:
    act = surrogate_actuator_step(act, p, TAU)
    prs = surrogate_pressure_step(prs, p, TAU)
    angles.append(act.angle)
    pressures.append(prs.pressure)
angles, pressures = np.array(angles), np.array(pressures)

# %% [markdown]
# Same supply pressure, different output depending on the sweep direction:

# %%
for i in (500, 1000, 1500):
    j = len(sweep) - 1 - i
    print(f"{sweep[i]:6.1f} kPa  angle up {angles[i]:6.2f} / down {angles[j]:6.2f} deg   "
          f"chamber up {pressures[i]:7.2f} / down {pressures[j]:7.2f} kPa")

# %% [markdown]
# Holding 400 kPa settles near 60 degrees plus the hysteresis offset.

# %%
s = SurrogateActuatorState()
for _ in range(4000):
    s = surrogate_actuator_step(s, 400.0, TAU)
print(f"steady angle {s.angle:.2f} deg, hysteresis variable {s.h:.3f}")
