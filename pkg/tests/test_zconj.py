import cmath
import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from bohrgap.errors import BoundaryRoot, InvalidSelector, NotConjugate, TranscendentalInput
from bohrgap.exactalg import IntPoly, NumberFieldElem, cyclotomic_poly
from bohrgap.reps import VectorH, ZRotationAlg
from bohrgap.zconj import (
    UnitAlgebraic,
    build_xi,
    count_roots_in_rect,
    decide_conjugacy,
    eval_at,
)

PHI5 = cyclotomic_poly(5)


def numeric_count(p: IntPoly, rect):
    x0, x1, y0, y1 = (float(v) for v in rect)
    roots = mpmath.polyroots([int(c) for c in reversed(p.coeffs)], maxsteps=500, extraprec=300)
    return sum(x0 < float(r.real) < x1 and y0 < float(mpmath.im(r)) < y1 for r in roots)


def test_count_simple():
    assert count_roots_in_rect(IntPoly([1, 0, 1]), (-1, 1, 0, 2)) == 1
    assert count_roots_in_rect(IntPoly([1, 0, 1]), (-2, 2, -2, 2)) == 2
    assert count_roots_in_rect(PHI5, (-2, 2, -2, 2)) == 4
    assert count_roots_in_rect(PHI5, (0, 2, 0, 2)) == 1


def test_count_boundary_root():
    with pytest.raises(BoundaryRoot):
        count_roots_in_rect(IntPoly([-1, 1]), (1, 2, -1, 1))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(-6, 6), min_size=2, max_size=7).filter(lambda c: c[-1] != 0),
    st.tuples(*[st.fractions(min_value=-3, max_value=3, max_denominator=7)] * 4),
)
def test_count_against_numeric_roots(coeffs, corners):
    x0, x1 = sorted(corners[:2])
    y0, y1 = sorted(corners[2:])
    if x0 == x1 or y0 == y1:
        return
    p = IntPoly(coeffs)
    rect = (x0, x1, y0, y1)
    try:
        exact = count_roots_in_rect(p, rect)
    except BoundaryRoot:
        return
    assert exact == numeric_count(p, rect)


def test_unit_algebraic_construct_and_reject():
    z = UnitAlgebraic.algebraic(PHI5, (0, 1, 0, 1))
    assert abs(z.numeric() - cmath.exp(2j * math.pi / 5)) < 1e-12
    x0, x1, y0, y1 = z.rect
    assert x1 - x0 < 1e-12 and y1 - y0 < 1e-12
    # x^2 - 3x + 1 has real roots off the unit circle
    with pytest.raises(InvalidSelector):
        UnitAlgebraic.algebraic(IntPoly([1, -3, 1]), (2, 3, -1, 1))
    with pytest.raises(InvalidSelector):
        UnitAlgebraic.algebraic(IntPoly([1, 0, 1]) * IntPoly([1, 1]), (-2, 2, -2, 2))
    with pytest.raises(InvalidSelector):
        UnitAlgebraic.algebraic(PHI5, (-2, 2, -2, 2))


def test_parse_forms():
    z = UnitAlgebraic.parse("unity:5:2")
    assert z.minpoly == PHI5
    assert UnitAlgebraic.parse("trans:e^i").label == "e^i"
    a = UnitAlgebraic.parse("alg:1 0 1:-1/2,1/2,1/2,3/2")
    assert abs(a.numeric() - 1j) < 1e-12


def test_eval_at_examples():
    z = UnitAlgebraic.root_of_unity(5)
    assert eval_at(z, PHI5).is_zero
    assert not eval_at(z, IntPoly([-1, 1])).is_zero
    # z^5 - 1 = 0
    assert eval_at(z, IntPoly([-1, 0, 0, 0, 0, 1])).is_zero
    t = UnitAlgebraic.transcendental("t")
    assert eval_at(t, IntPoly([0])).is_zero and not eval_at(t, PHI5).is_zero


def test_conjugacy_named():
    z, w = UnitAlgebraic.root_of_unity(5, 1), UnitAlgebraic.root_of_unity(5, 2)
    v = decide_conjugacy(z, w)
    assert v.conjugate and v.certificate == PHI5
    one, minus = UnitAlgebraic.root_of_unity(1), UnitAlgebraic.root_of_unity(2, 1)
    v = decide_conjugacy(one, minus)
    assert not v.conjugate
    assert eval_at(one, v.certificate).is_zero != eval_at(minus, v.certificate).is_zero
    a, b = UnitAlgebraic.transcendental("a"), UnitAlgebraic.transcendental("b")
    assert decide_conjugacy(a, b).conjugate
    assert not decide_conjugacy(a, z).conjugate


def test_conjugacy_json():
    v = decide_conjugacy(UnitAlgebraic.root_of_unity(5, 1), UnitAlgebraic.root_of_unity(5, 3))
    assert v.to_json() == '{"conjugate": true, "certificate": "1 1 1 1 1"}'


def test_conjugacy_via_rectangle():
    # x^4 - x^2 + 1 entered by hand, selecting exp(i pi/6)
    p = IntPoly([1, 0, -1, 0, 1])
    z = UnitAlgebraic.algebraic(p, (0, 1, 0, Fraction(3, 4)))
    assert abs(z.numeric() - cmath.exp(1j * math.pi / 6)) < 1e-12
    assert decide_conjugacy(z, UnitAlgebraic.root_of_unity(12, 5)).conjugate
    assert not decide_conjugacy(z, UnitAlgebraic.root_of_unity(8)).conjugate


def test_equivalence_relation_small():
    pts = [UnitAlgebraic.root_of_unity(n, a) for n in (1, 2, 3, 4, 6, 12) for a in range(n)]
    rel = {(i, j): decide_conjugacy(x, y).conjugate for i, x in enumerate(pts) for j, y in enumerate(pts)}
    idx = range(len(pts))
    assert all(rel[i, i] for i in idx)
    assert all(rel[i, j] == rel[j, i] for i in idx for j in idx)
    assert all(not (rel[i, j] and rel[j, k]) or rel[i, k] for i in idx for j in idx for k in idx)


@pytest.mark.parametrize("n", [7, 12, 30])
def test_cyclotomic_law(n):
    pts = [UnitAlgebraic.root_of_unity(n, a) for a in range(n)]
    for a in range(n):
        for b in range(n):
            same = n // math.gcd(a, n) == n // math.gcd(b, n)
            assert decide_conjugacy(pts[a], pts[b]).conjugate == same


def _rand_elem(rng, m):
    return NumberFieldElem(m, [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(m.degree)])


def test_xi_ring_homomorphism():
    z, w = UnitAlgebraic.root_of_unity(5, 1), UnitAlgebraic.root_of_unity(5, 2)
    xi = build_xi(z, w)
    rng = random.Random(4)
    for _ in range(100):
        a, b = _rand_elem(rng, PHI5), _rand_elem(rng, PHI5)
        assert xi(a + b) == xi(a) + xi(b)
        assert xi(a * b) == xi(a) * xi(b)
    assert xi(xi.z()).evaluate(w.numeric()) == pytest.approx(w.numeric(), abs=1e-12)


def test_xi_ratio_numeric():
    z, w = UnitAlgebraic.root_of_unity(7, 1), UnitAlgebraic.root_of_unity(7, 3)
    xi = build_xi(z, w)
    p, q = IntPoly([1, 2, 0, 1]), IntPoly([3, 1])
    img = xi.ratio(p, q)
    wn = w.numeric()
    assert img.evaluate(wn) == pytest.approx(p(wn) / q(wn), abs=1e-10)


def test_xi_rejects():
    with pytest.raises(NotConjugate):
        build_xi(UnitAlgebraic.root_of_unity(5), UnitAlgebraic.root_of_unity(7))
    with pytest.raises(TranscendentalInput):
        build_xi(UnitAlgebraic.transcendental("t"), UnitAlgebraic.root_of_unity(5))


def test_rotation_intertwining():
    z, w = UnitAlgebraic.root_of_unity(5, 1), UnitAlgebraic.root_of_unity(5, 2)
    xi = build_xi(z, w)
    rz, rw = ZRotationAlg(z), ZRotationAlg(w)
    rng = random.Random(9)
    v = VectorH({0: _rand_elem(rng, PHI5), 1: _rand_elem(rng, PHI5)}, True)
    for n in range(-3, 4):
        moved = rz.apply((n,), v)
        lhs = xi.transport([moved[0], moved[1]])
        image = VectorH(dict(enumerate(xi.transport([v[0], v[1]]))), True)
        rhs = rw.apply((n,), image)
        assert list(lhs) == [rhs[0], rhs[1]]
