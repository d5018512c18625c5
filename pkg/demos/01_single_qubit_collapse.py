# %% [markdown]
# A single qubit under collapse noise
#
# The qubit precesses about x while the collapse term dephases it in the z
# basis at rate lam. Every Bloch component decays at the spectral gap.

# %%
import numpy as np

from collapseprobe.liouville import analytic_single_qubit, build_liouvillian, propagate, spectrum, steady_state
from collapseprobe.model import BlochState, DissipatorSpec, SingleQubitModel, bloch_pure_state, bloch_vector

lam = 0.1
model = SingleQubitModel(1.0, lam)
liou = build_liouvillian(model.hamiltonian(), DissipatorSpec(((1, 1, 1.0),)), 1, lam)

# %%
spec = spectrum(liou)
print("rapidities:", np.round(spec.rapidities, 6))
print("gap:", spec.gap)
print("steady state:\n", np.round(steady_state(liou, spec), 12))

# %%
rho0 = bloch_pure_state(BlochState(0.0, 0.0))
ts = np.linspace(0, 50, 11)
num = np.array([bloch_vector(propagate(liou, rho0, t)) for t in ts])
exact = bloch_vector(analytic_single_qubit(1.0, lam, rho0, ts))
print("max deviation from closed form:", np.abs(num - exact).max())

# %%
for t, (x, y, z) in zip(ts, num):
    print(f"t={t:5.1f}  z={z:+.4f}  envelope={np.exp(-lam * t):.4f}")
