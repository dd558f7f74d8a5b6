"""
Success probability for growing widths
======================================

The potential is normalised so that its peak is always lambda = pi at
the centre vertex (50, 50). Widening it spreads the phase over the
neighbourhood of the target and the search degrades, first slowly and
then abruptly between sigma = 0.3 and 0.5.

The distributions at each curve's peak show where the probability
actually goes.
"""

import math

import matplotlib.pyplot as plt

import qwsearch as qw

L = 100
geom = qw.GridGeometry(L)

fig, ax = plt.subplots()
for sigma in (0.01, 0.35, 0.4, 50.0):
    field = qw.bivariate_gaussian_field(geom, qw.GaussianParams.isotropic(geom, sigma, math.pi))
    rec = qw.run(qw.EvolutionConfig(qw.model1(), field, steps=320, window=(0, 320)))
    print(f"sigma={sigma:<6} peak {rec.p_max:.5f} at t={rec.t_peak}")
    ax.plot(rec.success_series, label=rf"$\sigma={sigma}$")
ax.set_xlabel("t")
ax.set_ylabel("p_t(50, 50)")
ax.set_yscale("log")
ax.legend()
fig.savefig("success_over_time.png", dpi=120)

# distributions at the peak times
fig, axes = plt.subplots(1, 3, figsize=(12, 4))
for ax, (sigma, t) in zip(axes, [(0.35, 154), (0.4, 316), (50.0, 62)]):
    field = qw.bivariate_gaussian_field(geom, qw.GaussianParams.isotropic(geom, sigma, math.pi))
    rec = qw.run(qw.EvolutionConfig(qw.model1(), field, steps=t, snapshot_steps=(t,)))
    ax.imshow(rec.snapshots[0][1].probabilities.T, origin="lower")
    ax.set_title(rf"$\sigma={sigma}$, t={t}")
fig.savefig("distributions.png", dpi=120)
