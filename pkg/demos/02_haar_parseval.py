"""
Haar coefficients and Parseval's identity
=========================================

The discrepancy function expanded in the tensor Haar basis.  Coefficients of
boxes with zero or one point have closed forms; the weighted squares add up
to the squared L2-norm.
"""

from fractions import Fraction

from l2disc import PointSet, hammersley
from l2disc.discrepancy import l2_squared
from l2disc.haar import DyadicBox, mu, parseval_levels, quarter_of

# one point in the lower-left box [0,1/2)^2
box = DyadicBox.of(1, 1, 0, 0)
for z in [(Fraction(1, 8), Fraction(1, 8)), (Fraction(3, 8), Fraction(1, 8)), (Fraction(3, 4), Fraction(3, 4))]:
    c = mu(PointSet([z]), box)
    print(f"z={z[0]},{z[1]}  quarter={quarter_of(box, z):<8} mu={c.value}  ({c.derivation})")

# Parseval partial sums for hammersley(2) converge to the full norm
ps = hammersley(2)
target = l2_squared(ps)
sums = parseval_levels(ps, 16)
for level in (0, 2, 4, 8, 12, 16):
    print(f"level {level:>2}: partial {sums[level]:.12f}  gap {(target - sums[level]) / target:.2e}")
