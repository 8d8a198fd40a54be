import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bohrgap.duality import (
    AutoAction,
    Character,
    FiniteAbelian,
    charpoly,
    dual_conjugacy_transport,
    enumerate_dual,
    fixed_counts,
    parse_matrix,
    toral_ergodicity,
    unit_action,
)
from bohrgap.errors import InvalidAction, NotIntertwining, NotIsomorphism, NotUnimodular, OrderCapExceeded
from bohrgap.exactalg import IntPoly

from oracles import brute_fixed_counts, numeric_has_root_of_unity


def test_finite_abelian_basics():
    A = FiniteAbelian.parse("abelian = 2,4")
    assert A.order == 8 and A.exponent == 4 and A.rank == 2
    assert len(A.elements()) == 8
    assert list(A.index(A.elements())) == list(range(8))
    with pytest.raises(ValueError):
        FiniteAbelian([4, 2])
    with pytest.raises(OrderCapExceeded):
        FiniteAbelian([1000, 1000], cap=10**5)


def test_dual_group_size_and_orders():
    A = FiniteAbelian([2, 6])
    chars = enumerate_dual(A)
    assert len(chars) == 12
    # order of (a, b) in Z/2 x Z/6 is lcm(2/gcd(a,2), 6/gcd(b,6))
    expected = [int(np.lcm(2 // np.gcd(a, 2), 6 // np.gcd(b, 6))) for a in range(2) for b in range(6)]
    assert [c.order() for c in chars] == expected


def test_character_homomorphism():
    A = FiniteAbelian([3, 6])
    E = [tuple(x) for x in A.elements()]
    for chi in enumerate_dual(A):
        for x in E[:6]:
            for y in E[:6]:
                s = tuple((a + b) % n for a, b, n in zip(x, y, A.factors))
                assert chi(s) == chi(x) + chi(y)


def test_unit_action_counts():
    assert fixed_counts(FiniteAbelian([7]), unit_action(7, 3)) == (1, 1)
    # 4x = 0 mod 12 has four solutions
    assert fixed_counts(FiniteAbelian([12]), unit_action(12, 5)) == (4, 4)


def test_invalid_actions():
    with pytest.raises(InvalidAction):
        AutoAction(FiniteAbelian([6]), [[[2]]])
    with pytest.raises(InvalidAction):
        AutoAction(FiniteAbelian([2, 4]), [[[1, 0], [1, 1]]])


def test_dual_apply_matches_definition():
    A = FiniteAbelian([5, 5])
    act = AutoAction(A, [[[1, 2], [3, 2]]])
    E = [tuple(x) for x in A.elements()]
    inv = {act.apply(0, x): x for x in E}
    for chi in enumerate_dual(A):
        g_chi = act.dual_apply(0, chi)
        assert all(g_chi(x) == chi(inv[x]) for x in E)


@pytest.mark.parametrize("n", [2, 9, 12, 30, 64, 100])
def test_unit_counts_against_oracle(n):
    for u in range(1, n):
        if np.gcd(u, n) != 1:
            continue
        assert fixed_counts(FiniteAbelian([n]), unit_action(n, u)) == brute_fixed_counts([n], [[[u]]])


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.lists(st.integers(0, 12), min_size=4, max_size=4))
def test_matrix_counts_against_oracle(p, entries):
    M = [[entries[0] % p, entries[1] % p], [entries[2] % p, entries[3] % p]]
    if (M[0][0] * M[1][1] - M[0][1] * M[1][0]) % p == 0:
        return
    A = FiniteAbelian([p, p])
    counts = fixed_counts(A, AutoAction(A, [M]))
    assert counts == brute_fixed_counts([p, p], [M])
    assert counts[0] == counts[1]


def test_transport_conjugate_action():
    A = FiniteAbelian([7, 7])
    M = np.array([[2, 1], [1, 1]])
    xi = np.array([[1, 3], [0, 1]])
    xi_inv = np.array([[1, -3], [0, 1]])
    M2 = (xi @ M @ xi_inv) % 7
    act, act2 = AutoAction(A, [M]), AutoAction(A, [M2])
    dual = dual_conjugacy_transport(xi, act, act2)
    E = [tuple(x) for x in A.elements()]
    for chi in enumerate_dual(A):
        img = dual(chi)
        # xi* chi = chi o xi^-1
        for x in E[:10]:
            y = tuple(int(c) for c in (np.array(x) @ xi.T) % 7)
            assert img(y) == chi(x)


def test_transport_not_intertwining():
    A = FiniteAbelian([5])
    with pytest.raises(NotIntertwining) as exc:
        dual_conjugacy_transport([[1]], unit_action(5, 2), unit_action(5, 3))
    assert exc.value.witness is not None
    g, x = exc.value.witness
    assert unit_action(5, 2).apply(g, x) != unit_action(5, 3).apply(g, x)


def test_transport_not_isomorphism():
    with pytest.raises(NotIsomorphism):
        dual_conjugacy_transport([[2]], unit_action(4, 1), unit_action(4, 1))
    with pytest.raises(NotIsomorphism):
        dual_conjugacy_transport([[1]], unit_action(4, 1), unit_action(5, 1))


def test_charpoly_examples():
    assert charpoly([[2, 1], [1, 1]]) == IntPoly([1, -3, 1])
    assert charpoly([[0, -1], [1, 0]]) == IntPoly([1, 0, 1])
    assert charpoly([[0, 0, 1], [1, 0, 0], [0, 1, 0]]) == IntPoly([-1, 0, 0, 1])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=9, max_size=9))
def test_charpoly_matches_numpy(entries):
    M = np.array(entries).reshape(3, 3)
    ref = [int(round(c)) for c in np.poly(M.astype(float))]
    assert list(reversed(charpoly(M.tolist()).coeffs)) == ref


def test_named_ergodicity():
    cat = toral_ergodicity(parse_matrix("2 1 / 1 1"))
    assert cat.ergodic
    assert '"Ergodic"' in cat.to_json()
    rot = toral_ergodicity([[0, -1], [1, 0]])
    assert not rot.ergodic and rot.k == 4
    assert rot.witness == (1, 0) and rot.orbit_size == 4
    with pytest.raises(NotUnimodular):
        toral_ergodicity([[2, 0], [0, 1]])


def test_permutation_matrix_not_ergodic():
    v = toral_ergodicity([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    assert not v.ergodic and v.k == 1 and v.orbit_size == 1


def test_ergodicity_against_numeric_oracle():
    rng = np.random.default_rng(3)
    for _ in range(30):
        M = np.eye(3, dtype=int)
        for _ in range(6):
            i, j = rng.choice(3, 2, replace=False)
            E = np.eye(3, dtype=int)
            E[i, j] = rng.integers(-2, 3)
            M = M @ E
        v = toral_ergodicity(M.tolist())
        assert v.ergodic == (not numeric_has_root_of_unity(M.tolist()))
