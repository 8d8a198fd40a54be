"""
When are two rotations of Z additively conjugate?
=================================================

n -> z^n and n -> w^n on the plane are additively conjugate exactly when z
and w satisfy the same integer polynomials. For algebraic z that means a
shared minimal polynomial, and the conjugacy comes from the field map
Q(z) -> Q(w) sending z to w.
"""

from fractions import Fraction

from bohrgap import UnitAlgebraic, build_xi, decide_conjugacy
from bohrgap.exactalg import NumberFieldElem
from bohrgap.reps import VectorH, ZRotationAlg

z = UnitAlgebraic.root_of_unity(5, 1)
w = UnitAlgebraic.root_of_unity(5, 2)
print("zeta5 ~ zeta5^2:", decide_conjugacy(z, w).to_json())
print("1 ~ -1:", decide_conjugacy(UnitAlgebraic.root_of_unity(1), UnitAlgebraic.root_of_unity(2, 1)).to_json())

# Roots are also accepted as a minimal polynomial plus an isolating rectangle.
r = UnitAlgebraic.parse("alg:1 0 -1 0 1:0,1,0,3/4")
print(f"{r.numeric():.6f} ~ zeta12^5:", decide_conjugacy(r, UnitAlgebraic.root_of_unity(12, 5)).conjugate)

xi = build_xi(z, w)
a = NumberFieldElem(xi.modulus, [Fraction(1, 2), 3, 0, -1])
wn = w.numeric()
print("xi(a) at w:", xi(a).evaluate(wn), " direct:", 0.5 + 3 * wn - wn**3)

# The intertwining identity on a vector with Q(z) coordinates.
rz, rw = ZRotationAlg(z), ZRotationAlg(w)
v = VectorH({0: a, 1: a * a}, True)
for n in (-2, 1, 3):
    lhs = xi.transport([rz.apply((n,), v)[k] for k in (0, 1)])
    image = VectorH(dict(enumerate(xi.transport([v[0], v[1]]))), True)
    rhs = rw.apply((n,), image)
    print(n, list(lhs) == [rhs[0], rhs[1]])
