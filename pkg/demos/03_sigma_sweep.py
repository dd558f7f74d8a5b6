"""
Peak success probability against sigma
======================================

One engine run per (L, sigma), each reduced to the maximum success
probability within [0, 3 sqrt(N)]. Narrow potentials reproduce the AKR
peak, a sharp drop follows near sigma ~ 0.4, and very wide potentials
act as a global phase, leaving the uniform value 1/N.
"""

import matplotlib.pyplot as plt
import numpy as np

from qwsearch import experiments as ex

sigmas = np.logspace(-2, 4, 49)
spec = ex.SweepSpec(grid_sizes=[40, 70, 100], sigmas=sigmas)
table = ex.sigma_sweep(spec)

for L in spec.grid_sizes:
    rows = table.select(L=L)
    s = [r.sigma for r in rows]
    p = [r.p_max for r in rows]
    line, = plt.semilogx(s, p, label=f"L={L}")
    plt.axhline(rows[0].p_akr, color=line.get_color(), ls=":", lw=0.8)
    print(f"L={L}: p_akr={rows[0].p_akr:.4f}, p_max(sigma=1e4)*N={p[-1] * L * L:.4f}")

plt.xlabel(r"$\sigma$")
plt.ylabel(r"$p_{max}$")
plt.legend()
plt.savefig("sigma_sweep.png", dpi=120)
