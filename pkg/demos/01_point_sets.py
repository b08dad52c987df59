"""
Point sets and their L2-discrepancy
===================================

Hammersley sets, Fibonacci lattices and random points, measured with the
exact pair formula and a Monte Carlo estimate.
"""

import math

from l2disc import fibonacci_lattice, hammersley, random_uniform
from l2disc.discrepancy import discrepancy_at, l2_oracle, l2_squared, normalized_ratio

# the 8-point Hammersley set: i/8 paired with the bit-reversed i/8
ps = hammersley(3)
for p in ps:
    print(f"({p.x}, {p.y})")

# exact rational arithmetic when all coordinates are rationals
exact = l2_squared(ps, exact=True)
print("squared L2-discrepancy:", exact, "=", float(exact))

# local discrepancy: points in [0, x) minus N * area
print("D(3/4, 3/4) =", discrepancy_at(ps, (0.75, 0.75)).value)

# Monte Carlo estimate as a sanity check
est, se = l2_oracle(ps, 200_000, seed=1)
print(f"Monte Carlo: {est:.5f} +- {se:.5f}")

# normalized ratio ||D|| / sqrt(log N) across families
print()
print(f"{'set':<24}{'N':>7}{'ratio':>10}")
for name, pset in [
    ("hammersley(10)", hammersley(10)),
    ("fibonacci(17)", fibonacci_lattice(17)),
    ("fibonacci(17) sym", fibonacci_lattice(17, symmetrize=True)),
    ("random(1000)", random_uniform(1000, seed=0)),
]:
    print(f"{name:<24}{pset.N:>7}{normalized_ratio(pset):>10.4f}")

# every finite set stays above the universal constant
print("lower bound sqrt(317/172032/ln 2) =", math.sqrt(317 / 172032 / math.log(2)))
