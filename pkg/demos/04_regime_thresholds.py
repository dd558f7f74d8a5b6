"""
Where the regimes change
========================

Two thresholds are tracked against the number of vertices N = L^2:

* the smallest sigma whose peak falls below a fraction epsilon of the
  ideal AKR peak (the end of coherent search), and
* the smallest sigma whose peak is within epsilon of the uniform value
  in the sense 1 - p_u / p_max <= epsilon (the start of plain sampling).

Each threshold comes from a 40-per-decade log scan followed by
bisection. Both grow as a power of N; the first barely moves.

Running all ten grid sizes takes a few minutes on one core.
"""

import matplotlib.pyplot as plt

from qwsearch import experiments as ex

below = ex.threshold_scaling(ex.Criterion.BELOW_FRACTION_OF_AKR, epsilon=0.5)
near = ex.threshold_scaling(ex.Criterion.CLOSE_TO_UNIFORM, epsilon=0.5)

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for ax, res, title in [(axes[0], below, "p_max <= 0.5 p_akr"), (axes[1], near, "1 - p_u/p_max <= 0.5")]:
    N = [t.N for t in res.thresholds]
    s = [t.sigma_star for t in res.thresholds]
    ax.loglog(N, s, "o", label="threshold")
    ax.loglog(N, res.fit(N), "-", label=f"N^{res.exponent:.3f}")
    ax.set_title(title)
    ax.set_xlabel("N")
    ax.legend()
    print(f"{title:24s} exponent {res.exponent:+.4f}  (rms {res.fit.residual:.3g})")
fig.savefig("thresholds.png", dpi=120)
