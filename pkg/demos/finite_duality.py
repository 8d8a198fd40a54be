"""
Fixed points on both sides of finite duality
============================================

An automorphism of a finite abelian group fixes as many characters as
elements. Here we count both by enumeration and transport characters along
an intertwining isomorphism.
"""

import numpy as np

from bohrgap import FiniteAbelian
from bohrgap.duality import AutoAction, dual_conjugacy_transport, enumerate_dual, fixed_counts, unit_action
from bohrgap.errors import NotIntertwining

for n, u in [(12, 5), (12, 7), (30, 11), (64, 33)]:
    print(f"x -> {u}x on Z/{n}: fixed (elements, characters) =", fixed_counts(FiniteAbelian([n]), unit_action(n, u)))

A = FiniteAbelian([3, 9])
act = AutoAction(A, [[[1, 0], [3, 1]]])
print(A, "fixed:", fixed_counts(A, act), "of", len(enumerate_dual(A)))

# Conjugating by xi gives a second action; xi* carries fixed characters to fixed characters.
P = FiniteAbelian([7, 7])
M = np.array([[2, 1], [1, 1]])
xi = np.array([[1, 3], [0, 1]])
M2 = (xi @ M @ np.array([[1, -3], [0, 1]])) % 7
dual = dual_conjugacy_transport(xi, AutoAction(P, [M]), AutoAction(P, [M2]))
print("transported", len(dual.table), "characters")

try:
    dual_conjugacy_transport([[1]], unit_action(5, 2), unit_action(5, 3))
except NotIntertwining as exc:
    print("not intertwining, witness", exc.witness)
