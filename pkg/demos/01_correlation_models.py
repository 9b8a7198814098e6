"""
Correlation models
==================

A correlation model maps the angle between two measurement axes to the
expected product of the two +-1 outcomes.  This walk-through evaluates the
built-in models side by side and checks the two structural properties every
model shares: it stays inside [-1, 1] and it flips sign under theta -> pi - theta.
"""

# %%
# Evaluate every built-in model on a coarse grid.
import numpy as np

from bellcorr import (
    COSINE,
    CUBIC,
    LINEAR,
    FlippedSinglet,
    HemisphereStrategy,
    LhvMixture,
    PRBox,
    Singlet,
    joint_distribution,
    tabulated_from_samples,
)
from bellcorr.models import OUTCOMES

theta = np.linspace(0, np.pi, 9)
models = {
    "singlet": Singlet(),
    "flipped": FlippedSinglet(),
    "pr:linear": PRBox(LINEAR),
    "pr:cosine": PRBox(COSINE),
    "pr:cubic": PRBox(CUBIC),
    "lhv": LhvMixture((HemisphereStrategy(), HemisphereStrategy(1, 1, 0.6)), [0.5, 0.5]),
}

print("theta/pi " + " ".join(f"{name:>10}" for name in models))
for i, t in enumerate(theta):
    print(f"{t / np.pi:8.3f} " + " ".join(f"{m(t):10.4f}" for m in models.values()))

# %%
# Antisymmetry holds to rounding for every model.
grid = np.linspace(0, np.pi, 10_001)
for name, model in models.items():
    residual = np.max(np.abs(model(grid) + model(np.pi - grid)))
    print(f"{name:>10}: max |C(t) + C(pi - t)| = {residual:.1e}")

# %%
# A measured curve usually arrives as samples.  Only half the range is needed;
# the other half is filled in by reflection.
half = np.linspace(0, np.pi / 2, 33)
table = tabulated_from_samples(np.column_stack([half, -np.cos(half) ** 3]))
print("tabulated C(3 pi/4) =", table(3 * np.pi / 4), " expected", np.cos(np.pi / 4) ** 3)

# %%
# Each correlation value pins down a joint outcome distribution with uniform
# marginals, so no model can be used to signal.
dist = joint_distribution(PRBox(LINEAR), 3 * np.pi / 8)
for (a, b), p in zip(OUTCOMES, dist.probabilities):
    print(f"P(a={a:+d}, b={b:+d}) = {p:.3f}")
print("marginals:", dist.marginal_a, dist.marginal_b)
