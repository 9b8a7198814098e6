"""
Looking for a more nonlocal correlation
=======================================

Could some correlation violate every CHSH test at least as strongly as the
singlet, and some test more strongly?  ``find_domination_witness`` answers no
for any concrete model by exhibiting a test where the model falls short.
"""

# %%
import numpy as np

from bellcorr import (
    FlippedSinglet,
    PRBox,
    Singlet,
    contraction_certificate,
    find_domination_witness,
    tabulated_from_samples,
    theorem_iteration_bound,
)

for name, model in [("singlet", Singlet()), ("flipped", FlippedSinglet()), ("pr", PRBox())]:
    print(f"{name:>8}: {find_domination_witness(model).to_json()}")

# %%
# A model that is slightly stronger than the singlet at every angle.  The
# witness comes from following theta -> theta / 3 until the cosine's curvature
# can no longer keep up with the extra correlation.
half = np.linspace(0, np.pi / 2, 4001)
delta = 0.05
model = tabulated_from_samples(np.column_stack([half, np.maximum(-1, -np.cos(half) - delta * np.sin(half))]))

theta1 = np.pi / 3
cert = contraction_certificate(model, theta1)
print(f"\nexcess at theta1: {cert.delta:.5f}")
print(f"depth reached {cert.n_star}, bound {theorem_iteration_bound(theta1, cert.delta)}")
print(f"at theta = {cert.witness_angle:.5f}: model {cert.candidate_value:.6f} < singlet {cert.quantum_value:.6f}")

# %%
# A weaker model falls short on the first family instead.
weak = tabulated_from_samples(np.column_stack([half, -0.95 * np.cos(half)]))
print("\nweaker:", find_domination_witness(weak).to_json())
