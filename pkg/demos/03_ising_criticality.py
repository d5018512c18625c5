# %% [markdown]
# Probing a transverse-field Ising chain
#
# The probe attaches to the end of a short chain. Near h = J the chain is
# most sensitive to weak collapse noise. Small N keeps this demo quick.

# %%
import numpy as np

from collapseprobe.metrology import IsingExperiment, find_t_opt, run_scan
from collapseprobe.model import BlochState

pole = BlochState(np.pi, 0.0)
lam = 1e-3

# %%
exp = IsingExperiment(n_sites=3, h=1.0, j=1.0)
t_opt, g_max = find_t_opt(exp, lam, pole, t_window=(0.0, 300.0))
print(f"N=3 lam={lam}: t_opt={t_opt:.2f}, G={g_max:.4e}")

# %%
hs = run_scan("h_scan", exp, np.linspace(0.8, 1.2, 9), probe=pole, lam=lam, t=t_opt)
for h, r in zip(hs.grid, hs.records):
    print(f"h/J={h:.2f}  G={r.g_value:.4e}")

# %% [markdown]
# Correlated noise: the same chain with a Gaussian kernel of width rc.

# %%
corr = IsingExperiment(n_sites=3, noise="correlated", rc_over_a=2.0)
dg = run_scan("delta_g_scan", corr, np.geomspace(1e-4, 1e-2, 5), probe=pole, t=t_opt)
for lam_k, d in zip(dg.grid, dg.extra["delta_g"]):
    print(f"lam={lam_k:.1e}  delta G={d:+.3e}")
