"""
Occupancy census and the bundled lower bound
============================================

Counting dyadic boxes by how many points they hold, checking the counting
identities, and assembling the lower bound built from empty boxes and
one-point bundles.
"""

from l2disc import random_uniform
from l2disc.census import CellIndex, check_identities, dyadic_split, hm_rhs, level_census, master_terms
from l2disc.discrepancy import l2_squared

ps = random_uniform(300, seed=3)
M, kappa = dyadic_split(ps.N)
print(f"N = {ps.N} = 2^({M} + {kappa:.4f})")

cells = CellIndex(ps)
for level in range(M - 1, M + 3):
    c = level_census(ps, level, cells)
    print(f"level {level}: a0={c.a(0)} a1={c.a(1)} a2={c.a(2)} types={c.types}")

bad = [c for c in check_identities(ps, 10) if not c.ok]
print("identity failures:", len(bad))

# l2 >= master >= earlier bound, with the pieces of the master bound
t = master_terms(ps)
print(f"l2_squared   {l2_squared(ps):.6f}")
print(f"master       {t.total:.6f}  (empty {t.empty:.6f}, tail {t.tail:.6f}, bundles {t.bundles_M:.6f} + {t.bundles_M1:.6f})")
print(f"floor        {t.theorem_floor:.6f}")
print(f"earlier      {hm_rhs(ps):.6f}")
