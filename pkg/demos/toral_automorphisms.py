"""
Ergodic toral automorphisms
===========================

A unimodular integer matrix acts ergodically on the torus exactly when no
eigenvalue is a root of unity. The check is exact: look for a cyclotomic
factor of the characteristic polynomial.
"""

from bohrgap.duality import charpoly, parse_matrix, toral_ergodicity

for text in ["2 1 / 1 1", "0 -1 / 1 0", "0 -1 / 1 1", "1 1 / 0 1", "0 0 1 / 1 0 0 / 0 1 1"]:
    M = parse_matrix(text)
    v = toral_ergodicity(M)
    print(f"{text:22s} charpoly {charpoly(M)!s:18s} -> {v.to_json()}")
