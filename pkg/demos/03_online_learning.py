# %% [markdown]
# # Online output-layer learning
#
# With no forgetting, recursive least squares reproduces batch ridge
# regression sample by sample.

# %%
import numpy as np

from reservoir_control import rls_init, rls_update

rng = np.random.default_rng(0)
X = rng.normal(size=(150, 12))
y = X @ rng.normal(size=12) + 0.05 * rng.normal(size=150)

state = rls_init(r=7, delta=5, alpha=1.0, forgetting=1.0)
for phi, target in zip(X, y):
    rls_update(state, phi, target)

ridge = np.linalg.solve(X.T @ X + np.eye(12), X.T @ y)
print("relative difference to ridge:", np.linalg.norm(state.w_learned - ridge) / np.linalg.norm(ridge))

# %% [markdown]
# A forgetting factor below one lets the weights follow a mapping that changes.

# %%
for lam in (1.0, 0.98):
    s = rls_init(0, 2, 1.0, forgetting=lam)
    for t in range(600):
        phi = rng.normal(size=2)
        w = np.array([1.0, -2.0]) if t < 300 else np.array([-3.0, 0.5])
        rls_update(s, phi, float(w @ phi))
    print(f"lambda={lam}: final weights {np.round(s.w_learned, 3)}")
