"""
Random walks on Cayley graphs and the Kesten criterion
======================================================

The lazy walk on a group spends probability 1/(2k+1) at the identity and
on each generator and inverse. Its spectral radius is 1 exactly when the
group is amenable. We estimate it from finite Cayley balls.
"""

import math

from bohrgap import FreeGroup, Regular, ZPow, kesten_verdict, lazy_uniform, spectral_radius_truncated
from bohrgap.markov import radial_free_estimate

# On Z with weight 1/3 everywhere the truncated operator is a path graph,
# and its top eigenvalue has a closed form.
z = ZPow(1)
for r in (5, 10, 20, 40):
    est = spectral_radius_truncated(Regular(z), lazy_uniform(z), r)
    exact = 1 / 3 + 2 / 3 * math.cos(math.pi / (2 * r + 2))
    print(f"Z  r={r:3d}  estimate={est:.12f}  path formula={exact:.12f}")

# Z^2 is amenable: the estimates creep up to 1 and the verdict is NoGap.
z2 = ZPow(2)
report = kesten_verdict(z2, lazy_uniform(z2), [20, 40, 60])
print("Z^2", [round(x, 6) for x in report.estimates], report.verdict)

# The free group is not. Balls grow like 3^r, so radius 8 already has
# 13121 vertices, yet the estimate is still well below the limit.
f2 = FreeGroup(2)
report = kesten_verdict(f2, lazy_uniform(f2), range(2, 9))
print("F2", [round(x, 5) for x in report.estimates], report.verdict)

# Radial functions reduce the ball to a path with weighted edges, which
# lets the radius go far beyond what the ball itself allows.
limit = 1 / 5 + 2 * math.sqrt(3) / 5
for r in (8, 100, 1000, 4000):
    print(f"F2 radial r={r:5d}  {radial_free_estimate(2, 0.2, 0.2, r):.8f}  (limit {limit:.8f})")
