# %% [markdown]
# # Reservoirs
#
# Two interchangeable cores turn the look-ahead reference into a state vector:
# an echo state network and a tap-delay readout of a simulated sealed
# pneumatic chamber.

# %%
import numpy as np

from reservoir_control import EsnReservoir, TapDelayParams, TapDelayReservoir, esn_update, init_esn

# %% [markdown]
# ## Echo state network
# Weights are drawn once and rescaled to spectral radius 0.8.

# %%
params = init_esn(seed=0, N=50, rho=0.8, input_scale=1.0, gamma=0.8)
print("spectral radius:", np.max(np.abs(np.linalg.eigvals(params.reservoir_matrix))))

# %% [markdown]
# Fading memory: two different initial states forget their difference when
# driven by the same input.

# %%
rng = np.random.default_rng(1)
a, b = rng.uniform(-1, 1, 50), rng.uniform(-1, 1, 50)
u = np.sin(0.05 * np.arange(200))
for k, uk in enumerate(u):
    a, b = esn_update(a, params, uk), esn_update(b, params, uk)
    if k % 25 == 0:
        print(f"step {k:3d}  distance {np.linalg.norm(a - b):.2e}")

# %% [markdown]
# The stateful wrapper used by the control loop draws an initial state and
# washes it out with 100 zero-input steps.

# %%
esn = EsnReservoir(params, rng=2)
print("post-washout state norm:", np.linalg.norm(esn.state))

# %% [markdown]
# ## Tap-delay reservoir
# The reference (degrees) is converted to an active-chamber pressure, the
# passive chamber responds with lag and hysteresis, and the low-pass filtered
# readout is stacked into a 5-long buffer, newest first.

# %%
tap = TapDelayReservoir(TapDelayParams(tap_size=5, conversion_factor=7.0, filter_factor=0.01))
for k in range(2000):
    x = tap.update(30.0 + 20.0 * np.sin(2 * np.pi * 0.1 * k * 5e-3))
print("chamber pressure [kPa]:", round(tap.surrogate.pressure, 2))
print("tap buffer:", np.round(x, 3))
