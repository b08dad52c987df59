"""
The constants of the lower bound
================================

gamma(kappa) bounds a one-point bundle; Delta(kappa) is the per-level
density.  Its minimum over [0, 1] gives the universal constant, its maximum
the constant for the limsup.
"""

import numpy as np

from l2disc.bounds import case1_min, case2_min, certify_diagonal, delta, gamma, h_of, theorem_constants

for k in (0.0, 0.5):
    print(f"kappa={k}: case 1 min {case1_min(k)[1]:.3e}, case 2 min {case2_min(k)[2]:.3e}, h {h_of(k):.3e}")

# minimum of the far-quarter function sits on the diagonal; grid certificate
cert = certify_diagonal(0.8)
print("diagonal certificate at 0.8:", cert.h, cert.grid_min, cert.refined_argmin)

print()
for k in np.linspace(0, 1, 11):
    g, branch = gamma(float(k), with_branch=True)
    print(f"kappa {k:.1f}  gamma {g:.4e} ({branch})  Delta {delta(float(k)):.6e}")

print()
print("\n".join(theorem_constants().lines()))
