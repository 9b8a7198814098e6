"""
Maximising CHSH over measurement axes
=====================================

A coarse grid over the three coplanar separations followed by a pattern
search finds the largest CHSH value a model can reach.  The singlet stops at
2 sqrt 2, a PR box reaches the algebraic maximum 4 and local mixtures stay at 2.
"""

# %%
import time

import numpy as np

from bellcorr import HemisphereStrategy, LhvMixture, PRBox, Singlet, maximize_chsh

# one deterministic strategy already reaches the local ceiling; mixing more
# strategies can only average it down
lhv = LhvMixture((HemisphereStrategy(), HemisphereStrategy(-1, -1, 0.0)), [0.4, 0.6])

for name, model in [("singlet", Singlet()), ("pr", PRBox()), ("lhv", lhv)]:
    start = time.perf_counter()
    axes, record = maximize_chsh(model)
    elapsed = time.perf_counter() - start
    sep = ", ".join(f"{s:.4f}" for s in axes.separations())
    print(f"{name:>8}: {record.value:.9f}  separations ({sep})  {elapsed * 1e3:.0f} ms")

print("2 sqrt 2 =", 2 * np.sqrt(2), " pi/4 =", np.pi / 4)

# %%
# Leaving the plane does not help the singlet.
_, record = maximize_chsh(Singlet(), restrict_coplanar=False, budget=20_000)
print(f"non-coplanar singlet maximum: {record.value:.9f}")
