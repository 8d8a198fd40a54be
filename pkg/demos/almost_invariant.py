"""
Building blocks from almost invariant vectors
=============================================

Windows 1_[0,n)/sqrt(n) in l^2(Z) are nearly fixed by translation. We make
them orthonormal without losing control of the defect, then rescale an
exact family and pair it against a single witness vector.
"""

from bohrgap import ZPow, lazy_uniform
from bohrgap.almostinv import AlmostInvSeq, basis, dyadic_family, orthogonalize, scale_and_witness, sparsify_weak_null, windows

rep, vecs = windows(40)
seq = AlmostInvSeq(rep, lazy_uniform(ZPow(1)), vecs)
res = orthogonalize(seq)
for step in res.steps:
    g = next(iter(step.defects))
    print(f"k={step.k} used v_{step.m}: defect {step.defects[g]:.4f} <= bound {step.bounds[g]:.4f}")

# Exact family with defects 4^-n: the witness pairs to exactly 1/2.
rep, mu, vecs = dyadic_family(6)
bundle = scale_and_witness(AlmostInvSeq(rep, mu, vecs), 6)
print("epsilons:", [str(e) for e in bundle.epsilons])
print("pairings:", [str(p) for p in bundle.pairings()])

# Standard basis vectors drift off to infinity, so a sparse subsequence
# is almost orthogonal to all translates of the earlier picks.
rep, vecs = basis(9)
sp = sparsify_weak_null(vecs, ["a"], rep, 4)
print("sparse picks:", sp.indices, "v =", sp.vector)
