import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bohrgap.almostinv import (
    AlmostInvSeq,
    dyadic_family,
    orthogonalize,
    scale_and_witness,
    sparsify_weak_null,
    step_bound,
    windows,
    basis,
    parse_sequence,
)
from bohrgap.errors import NoAdmissibleIndex, SelectionFailed, SubsequenceExhausted
from bohrgap.groups import ZPow, lazy_uniform
from bohrgap.reps import Regular, VectorH, inner, trivial_rep


def gram(vs):
    return np.array([[float(inner(a, b)) for b in vs] for a in vs])


def test_step_bound_values():
    assert step_bound(1, 0.0) == math.inf
    assert step_bound(4, 0.1) == pytest.approx((0.1 + 1.0) / 0.5)


def test_windows_orthogonalize():
    rep, vecs = windows(40)
    seq = AlmostInvSeq(rep, lazy_uniform(ZPow(1)), vecs)
    res = orthogonalize(seq)
    ws = res.seq.vectors
    assert len(ws) >= 2
    assert np.abs(gram(ws) - np.eye(len(ws))).max() <= 1e-10
    assert all(s.holds() for s in res.steps)
    assert [s.m for s in res.steps] == [i + 1 for i in res.source[1:]]
    assert res.source == sorted(set(res.source))


def test_windows_selected_indices():
    rep, vecs = windows(40)
    res = orthogonalize(AlmostInvSeq(rep, lazy_uniform(ZPow(1)), vecs))
    # |<v_m, w_1>| = m^(-1/2) < 1 first happens at m = 2
    assert res.steps[0].m == 2


def test_orthogonalize_length_exhausted():
    rep, vecs = windows(10)
    seq = AlmostInvSeq(rep, lazy_uniform(ZPow(1)), vecs)
    with pytest.raises(NoAdmissibleIndex):
        orthogonalize(seq, length=50)


def test_orthogonalize_on_orthonormal_input_is_identity():
    rep, vecs = basis(6)
    res = orthogonalize(AlmostInvSeq(rep, lazy_uniform(ZPow(1)), vecs))
    assert res.source == [0, 1, 2, 3, 4, 5]
    for w, v in zip(res.seq.vectors, vecs):
        assert w.allclose(v.to_float())


def test_non_unit_rejected():
    rep = Regular(ZPow(1))
    with pytest.raises(ValueError):
        AlmostInvSeq(rep, lazy_uniform(ZPow(1)), [VectorH({(0,): 2})])


@pytest.mark.parametrize("N", [1, 3, 6, 10])
def test_dyadic_witness_exact(N):
    rep, mu, vecs = dyadic_family(N)
    seq = AlmostInvSeq(rep, mu, vecs)
    assert [d.max_defect for d in seq.defects] == [Fraction(1, 4**n) for n in range(1, N + 1)]
    b = scale_and_witness(seq, N)
    assert b.epsilons == [Fraction(1, 4**n) for n in range(1, N + 1)]
    assert all(p == Fraction(1, 2) for p in b.pairings())
    assert b.check()


def test_dyadic_family_orthonormal():
    _, _, vecs = dyadic_family(5)
    for i, a in enumerate(vecs):
        for j, b in enumerate(vecs):
            assert inner(a, b) == (1 if i == j else 0)


def test_witness_invariant_short_circuit(z1, mu_third):
    rep = trivial_rep(z1, 2)
    seq = AlmostInvSeq(rep, mu_third, [VectorH({0: 1})])
    b = scale_and_witness(seq, 3)
    assert b.invariant == VectorH({0: 1})
    assert b.witness is None


def test_witness_exhausted():
    rep, mu, vecs = dyadic_family(3)
    seq = AlmostInvSeq(rep, mu, vecs)
    with pytest.raises(SubsequenceExhausted):
        scale_and_witness(seq, 4)


def test_witness_float_mode():
    rep, mu, vecs = dyadic_family(5)
    seq = AlmostInvSeq(rep, mu, [v.to_float() for v in vecs])
    b = scale_and_witness(seq, 5)
    assert all(isinstance(p, float) for p in b.pairings())
    assert b.check(1e-9)


def test_sparsify_basis():
    rep, vecs = basis(5)
    res = sparsify_weak_null(vecs, [(1,)], rep, 3)
    assert res.indices == [0, 2, 4]
    assert res.verify()
    assert res.vector == VectorH({(0,): Fraction(1, 2), (2,): Fraction(1, 4), (4,): Fraction(1, 8)})


def test_sparsify_identity_only():
    rep, vecs = basis(4)
    res = sparsify_weak_null(vecs, [(0,)], rep, 4)
    assert res.indices == [0, 1, 2, 3]


def test_sparsify_failure():
    rep, vecs = basis(3)
    with pytest.raises(SelectionFailed) as exc:
        sparsify_weak_null(vecs, [(1,)], rep, 3)
    assert exc.value.n == 3


def test_parse_sequence_named():
    rep, vecs = parse_sequence("windows:5")
    assert len(vecs) == 5 and rep is not None
    rep, vecs = parse_sequence("basis:3")
    assert vecs[2] == VectorH.basis((2,))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=6), st.integers(min_value=0, max_value=10**6))
def test_orthogonalize_random_unit_vectors(d, seed):
    rng = np.random.default_rng(seed)
    g = ZPow(1)
    rep = trivial_rep(g, d)
    vecs = []
    for _ in range(8):
        x = rng.standard_normal(d)
        vecs.append(VectorH.from_array(x / np.linalg.norm(x)))
    res = orthogonalize(AlmostInvSeq(rep, lazy_uniform(g), vecs))
    ws = res.seq.vectors
    assert np.abs(gram(ws) - np.eye(len(ws))).max() <= 1e-10
    assert all(s.holds() for s in res.steps)
