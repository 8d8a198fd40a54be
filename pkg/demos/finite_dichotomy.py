"""
Fixed vectors versus a spectral gap in finite dimension
=======================================================

For an orthogonal representation on R^d three things coincide: a nonzero
fixed vector, singularity of D = I - P, and P having eigenvalue 1. When
none happens the gap audit gives a concrete contraction bound.
"""

import numpy as np

from bohrgap import MatrixRep, PermGroup, ZPow, lazy_uniform
from bohrgap.markov import dichotomy, gap_bound_audit, invariant_subspace, solve_D
from bohrgap.reps import DirectSum, VectorH, trivial_rep

z = ZPow(1)
mu = lazy_uniform(z)

# Rotation by 90 degrees fixes nothing.
rot = MatrixRep(z, [[[0, -1], [1, 0]]])
print("rotation:", dichotomy(rot, mu))
print("solve D x = (1, -2):", solve_D(rot, mu, VectorH({0: 1.0, 1: -2.0})))

# Adding a trivial summand plants a fixed line.
both = DirectSum([rot, trivial_rep(z, 1)])
print("rotation + trivial:", dichotomy(both, mu), invariant_subspace(both, mu))

# The audit certifies epsilon and checks ||P v||^2 against 1 - mu(h)mu(e)eps^2/2.
audit = gap_bound_audit(rot, mu)
print(f"eps={audit.epsilon:.6f} bound={audit.bound:.6f} worst sample={audit.max_observed:.6f}")

c2 = PermGroup(2, [(1, 0)])
sign = gap_bound_audit(MatrixRep(c2, [[[-1]]]), lazy_uniform(c2))
print("sign rep:", sign.bound, sign.max_observed)

# A random orthogonal matrix in odd dimension with det 1 always fixes a line.
rng = np.random.default_rng(0)
q, r = np.linalg.qr(rng.standard_normal((5, 5)))
q = q * np.sign(np.diag(r))
if np.linalg.det(q) < 0:
    q[:, 0] *= -1
print("random SO(5):", dichotomy(MatrixRep(z, [q]), mu))
