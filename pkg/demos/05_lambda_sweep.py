"""
Changing the height of the potential
====================================

With lambda = c * pi the phase at the target vertex is no longer a
perfect sign flip. For narrow potentials c = 1 is still optimal; as the
potential widens, the best c moves to smaller values and the attainable
peak shrinks.
"""

import matplotlib.pyplot as plt
import numpy as np

from qwsearch import experiments as ex

c_values = np.round(np.linspace(0, 2, 41), 10)
table = ex.lambda_sweep(ex.SweepSpec([100], [0.01, 0.1, 0.2, 0.3, 0.4], c_values))

for sigma in (0.01, 0.1, 0.2, 0.3, 0.4):
    p = table.column("p_max", sigma=sigma)
    best = c_values[int(np.argmax(p))]
    print(f"sigma={sigma:<5} best c={best:.2f}  p_max={p.max():.4f}")
    plt.plot(c_values, p, label=rf"$\sigma={sigma}$")
plt.axhline(ex.akr_peak(100)[1], color="k", ls="--", lw=0.8, label="AKR")
plt.axhline(1e-4, color="r", ls=":", lw=0.8)
plt.xlabel("c")
plt.ylabel(r"$p_{max}$")
plt.legend()
plt.savefig("lambda_sweep.png", dpi=120)
