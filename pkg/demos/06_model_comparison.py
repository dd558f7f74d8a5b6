"""
Grover/flip-flop against Hadamard/standard shift
================================================

Model 2 replaces the AKR ingredients with a Hadamard coin and a shift
that keeps the direction, bouncing off reflective walls. Both models see
the same potential and are compared over t in [0, 300].
"""

import matplotlib.pyplot as plt
import numpy as np

from qwsearch import experiments as ex

sigmas = ex.default_sigma_scan(per_decade=5)
by_sigma = ex.compare_models(100, sigmas, [1.0])
p1 = by_sigma.column("p_max", model="model1")
p2 = by_sigma.column("p_max", model="model2")

fig, axes = plt.subplots(1, 2, figsize=(11, 4))
axes[0].semilogx(sigmas, p1, label="Model 1")
axes[0].semilogx(sigmas, p2, "--", label="Model 2")
axes[0].set_xlabel(r"$\sigma$")
axes[0].legend()
print("Model 1 >= Model 2 everywhere:", bool(np.all(p1 >= p2)))
print("largest Model 2 peak in units of 1/N: %.1f" % (p2.max() * 1e4))

c_values = np.round(np.linspace(0, 2, 41), 10)
by_height = ex.compare_models(100, [1.0], c_values)
q1 = by_height.column("p_max", model="model1")
q2 = by_height.column("p_max", model="model2")
axes[1].plot(c_values, q1, label="Model 1")
axes[1].plot(c_values, q2, "--", label="Model 2")
axes[1].set_xlabel("c")
axes[1].legend()
print("c where Model 2 is ahead at sigma=1:", c_values[q2 > q1])
fig.savefig("model_comparison.png", dpi=120)
