"""
Rugged and linear potentials
============================

Any real field can drive the walk. Ackley and Rastrigin landscapes,
inverted so the global optimum at the centre carries the largest phase,
have many competing local maxima. A linear field phi * x is the
electric walk: no vertex is singled out at all.
"""

import math

import matplotlib.pyplot as plt

import qwsearch as qw

L = 100
geom = qw.GridGeometry(L)
fields = {
    "ackley": qw.ackley_field(geom, math.pi),
    "rastrigin": qw.rastrigin_field(geom, math.pi),
    "linear": qw.linear_field(geom, 0.1),
}

fig, axes = plt.subplots(2, 3, figsize=(12, 7))
for col, (name, field) in enumerate(fields.items()):
    axes[0, col].imshow(field.values.T, origin="lower")
    axes[0, col].set_title(name)
    for model in (qw.model1(), qw.model2()):
        rec = qw.run(qw.EvolutionConfig(model, field, steps=300))
        axes[1, col].plot(rec.success_series, label=model.label.value)
        print(f"{name:10s} {model.label.value}: p_max={rec.p_max:.5f} at t={rec.t_peak}")
    axes[1, col].legend()
fig.savefig("other_potentials.png", dpi=120)
