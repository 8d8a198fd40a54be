from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bohrgap.errors import DimensionMismatch, NotHomomorphism, NotOrthogonal, NotUnitary, ZeroVector
from bohrgap.groups import FreeGroup, PermGroup, ZPow, lazy_uniform
from bohrgap.reps import (
    DirectSum,
    MatrixRep,
    Regular,
    VectorH,
    ZRotationAlg,
    apply_g,
    format_vector,
    inner,
    invariance_defect,
    parse_matrix_rep,
    parse_vector,
    realify,
    realify_vector,
    sigma_eval,
    trivial_rep,
)
from bohrgap.zconj import UnitAlgebraic

from conftest import random_orthogonal


def test_apply_examples(z1, rot90):
    assert apply_g(Regular(z1), 1, VectorH.basis((0,))) == VectorH.basis((1,))
    assert apply_g(rot90, 1, VectorH({0: 1})) == VectorH({1: 1})
    rho = ZRotationAlg(UnitAlgebraic.root_of_unity(5, 1))
    v = VectorH({0: 1})
    w = v
    for _ in range(5):
        w = rho.apply(1, w)
    assert w == v
    assert rho.apply(5, v) == v and rho.apply(-5, v) == v


def test_truncation_drops(z1):
    rep = Regular(z1, radius=2)
    assert rep.apply(1, VectorH.basis((2,))).is_zero()


def test_inner_examples():
    assert inner(VectorH.basis((0,)), VectorH.basis((1,))) == 0
    assert inner(VectorH({0: 1, 1: 2}), VectorH({0: 3, 1: 4})) == 11
    v = VectorH({0: Fraction(1, 3), 4: -2})
    assert inner(v, v) == Fraction(37, 9)
    assert inner(VectorH({}), VectorH({})) == 0


def test_mismatch():
    with pytest.raises(DimensionMismatch):
        inner(VectorH({0: 1}), VectorH({0: 1.5}))
    with pytest.raises(DimensionMismatch):
        inner(VectorH({0: 1}), VectorH({(0,): 1}))


def test_defect_examples(z1, sign_rep, mu_half, rot90, mu_third):
    assert invariance_defect(trivial_rep(z1, 2), mu_third, VectorH({0: 1})).max_defect == 0
    rep = invariance_defect(sign_rep, mu_half, VectorH({0: 1}))
    assert rep.max_defect == 2
    d = invariance_defect(Regular(z1), lazy_uniform(z1), VectorH.basis((0,)))
    assert d.max_defect == pytest.approx(np.sqrt(2), abs=1e-12)
    assert set(d.defects.values()) == {d.max_defect}
    with pytest.raises(ZeroVector):
        invariance_defect(rot90, mu_third, VectorH({}))


def test_realify_examples(z1):
    assert np.array_equal(realify(z1, [[[1j]]]).dense(1), [[0, -1], [1, 0]])
    assert np.array_equal(realify(z1, [[[1]]]).dense(1), np.eye(2))
    exact = realify(z1, [[[(Fraction(3, 5), Fraction(4, 5))]]])
    assert exact.exact
    m = exact.matrix(1)
    assert tuple(tuple(sum(m[k][i] * m[k][j] for k in range(2)) for j in range(2)) for i in range(2)) == ((1, 0), (0, 1))
    with pytest.raises(NotUnitary):
        realify(z1, [[[2]]])


def test_realify_preserves_defect(z1):
    rng = np.random.default_rng(3)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    u, _ = np.linalg.qr(a)
    real = realify(z1, [u])
    mu = lazy_uniform(z1)
    for _ in range(20):
        c = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        complex_defect = max(np.linalg.norm(u @ c - c), np.linalg.norm(u.conj().T @ c - c))
        d = invariance_defect(real, mu, realify_vector(c))
        assert float(d.max_defect) == pytest.approx(complex_defect, abs=1e-9)


def test_sigma_examples():
    assert sigma_eval(VectorH({0: Fraction(3, 2)}), VectorH({0: 1})).value == Fraction(1, 2)
    assert sigma_eval(VectorH({0: 2}), VectorH({0: 1})).value == 0


@settings(max_examples=50, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=3, max_size=3),
       st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=3, max_size=3),
       st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=3, max_size=3))
def test_sigma_additive(v, w1, w2):
    V, W1, W2 = (VectorH.from_array(x) for x in (v, w1, w2))
    assert sigma_eval(V, W1 + W2) == sigma_eval(V, W1) + sigma_eval(V, W2)


def test_orthogonality_preserved_float():
    rng = np.random.default_rng(0)
    g = FreeGroup(2)
    rep = MatrixRep(g, [random_orthogonal(rng, 4), random_orthogonal(rng, 4)])
    gens = g.generators()
    for _ in range(1000):
        v, w = (VectorH.from_array(rng.standard_normal(4)) for _ in range(2))
        h = gens[rng.integers(len(gens))]
        assert abs(inner(rep.apply(h, v), rep.apply(h, w)) - inner(v, w)) <= 1e-9


@settings(max_examples=100, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=2, max_size=2),
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=2, max_size=2),
       st.integers(-4, 4))
def test_orthogonality_preserved_exact(v, w, n):
    rep = realify(ZPow(1), [[[(Fraction(3, 5), Fraction(4, 5))]]])
    V, W = VectorH.from_array(v), VectorH.from_array(w)
    assert inner(rep.apply(n, V), rep.apply(n, W)) == inner(V, W)


@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=4), st.lists(st.sampled_from([1, -1, 2, -2]), max_size=4))
def test_action_is_homomorphism(word_g, word_h):
    g = FreeGroup(2)
    rep = Regular(g, radius=10)
    a, b = g.from_word(word_g), g.from_word(word_h)
    v = VectorH({(): 1, (1,): 2, (-2, 1): 3})
    assert rep.apply(a, rep.apply(b, v)) == rep.apply(g.mul(a, b), v)


def test_matrix_rep_checks(z1):
    with pytest.raises(NotOrthogonal):
        MatrixRep(z1, [[[1, 1], [0, 1]]])
    c3 = PermGroup.from_cycles(3, ["(0 1 2)"])
    with pytest.raises(NotHomomorphism):
        MatrixRep(c3, [[[0, 1], [1, 0]]])
    z2 = ZPow(2)
    with pytest.raises(NotHomomorphism):
        MatrixRep(z2, [[[0, 1], [1, 0]], [[1, 0], [0, -1]]])
    assert MatrixRep(z2, [[[1, 0], [0, -1]], [[-1, 0], [0, 1]]]).exact


def test_direct_sum(c2, sign_rep):
    rep = DirectSum([trivial_rep(c2), sign_rep])
    g = c2.gens[0]
    assert rep.apply(g, VectorH({0: 1, 1: 1})) == VectorH({0: 1, 1: -1})
    assert rep.dim == 2


def test_vector_files():
    g = FreeGroup(2)
    v = parse_vector("e\t1/2\na b'\t-3\n", g)
    assert v == VectorH({(): Fraction(1, 2), (1, -2): -3})
    assert parse_vector(format_vector(v, g), g) == v
    rep = parse_matrix_rep("gen a\n0 -1\n1 0\n", ZPow(1))
    assert rep.exact and rep.apply(1, VectorH({0: 1})) == VectorH({1: 1})
