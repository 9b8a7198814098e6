"""
Two one-parameter CHSH families
===============================

The general CHSH expression needs four axes.  Placing them in a plane with
separations (theta, pi/2 - theta, theta) or (theta/3, theta/3, theta/3) gives
two families that depend on a single angle.  Here both are scanned for the
singlet and for a PR box.
"""

# %%
import numpy as np

from bellcorr import AxisQuadruple, PRBox, Singlet, chsh1, chsh2, chsh_general
from bellcorr.chsh import chsh1_curve, chsh2_curve, interior_grid

theta = interior_grid(11)
for name, model in [("singlet", Singlet()), ("pr", PRBox())]:
    v1, _ = chsh1_curve(model, theta)
    v2, q2 = chsh2_curve(model, theta)
    print(f"\n{name}")
    print(" theta    chsh1    chsh2  singlet chsh2")
    for row in zip(theta, v1, v2, q2):
        print(" {:.3f}  {:7.4f}  {:7.4f}  {:7.4f}".format(*row))

# %%
# The PR box wins the first family everywhere but only ever reaches 2 on the
# second family below pi/4, where the singlet is strictly above 2.
rec = chsh2(PRBox(), np.pi / 8)
print(f"\nchsh2 at pi/8: PR {rec.value:.6f}, singlet {rec.quantum_reference:.6f}, gap {rec.gap:.6f}")

# %%
# Both families are special cases of the four-axis expression.
t = 0.4
print(chsh_general(Singlet(), AxisQuadruple.coplanar(t, np.pi / 2 - t, t)).value, chsh1(Singlet(), t).value)
print(chsh_general(Singlet(), AxisQuadruple.coplanar(t / 3, t / 3, t / 3)).value, chsh2(Singlet(), t).value)
