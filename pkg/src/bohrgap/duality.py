"""Finite Pontryagin duality, dual actions and toral ergodicity.

Finite abelian groups are products Z/n_1 x ... x Z/n_r in invariant-factor
form. A character is stored by its coefficients a with
chi(x) = sum a_i x_i / n_i mod 1. Everything is checked by exhaustive
enumeration under an order cap, with numpy doing the bulk arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InvalidAction, NotIntertwining, NotIsomorphism, NotUnimodular, OrderCapExceeded
from .exactalg import IntPoly, TorusValue, cyclotomic_factor, cyclotomic_poly

ORDER_CAP = 2**20
WITNESS_NORM_CAP = 1000


@dataclass(frozen=True)
class FiniteAbelian:
    factors: tuple

    def __init__(self, factors: Sequence[int] = (), cap: int = ORDER_CAP):
        factors = tuple(int(n) for n in factors)
        if any(n < 2 for n in factors):
            raise ValueError("invariant factors must be at least 2")
        if any(b % a for a, b in zip(factors, factors[1:])):
            raise ValueError(f"{factors} is not a divisibility chain")
        object.__setattr__(self, "factors", factors)
        if self.order > cap:
            raise OrderCapExceeded(f"|A| = {self.order} exceeds the cap {cap}")

    @classmethod
    def parse(cls, text: str, cap: int = ORDER_CAP) -> "FiniteAbelian":
        """``abelian = 2,4,8`` or just ``2,4,8``; an empty list is the trivial group."""
        text = text.split("=", 1)[1] if "=" in text else text
        parts = [p for p in text.replace(" ", "").split(",") if p]
        return cls([int(p) for p in parts], cap)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def exponent(self) -> int:
        return self.factors[-1] if self.factors else 1

    def moduli(self) -> np.ndarray:
        return np.array(self.factors, dtype=np.int64)

    def elements(self) -> np.ndarray:
        """All elements, lexicographic, as an (order, rank) integer array."""
        if not self.factors:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*[np.arange(n) for n in self.factors], indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    def index(self, xs: np.ndarray) -> np.ndarray:
        """Position of each row in ``elements()`` (mixed radix)."""
        idx = np.zeros(len(xs), dtype=np.int64)
        for i, n in enumerate(self.factors):
            idx = idx * n + xs[:, i]
        return idx

    def __str__(self):
        return "abelian = " + ",".join(map(str, self.factors))


@dataclass(frozen=True)
class Character:
    group: FiniteAbelian
    coeffs: tuple

    def __call__(self, x: Sequence[int]) -> TorusValue:
        N = self.group.exponent
        s = sum(a * xi * (N // n) for a, xi, n in zip(self.coeffs, x, self.group.factors))
        return TorusValue.of(Fraction(s % N, N))

    def order(self) -> int:
        N = self.group.exponent
        units = [a * (N // n) % N for a, n in zip(self.coeffs, self.group.factors)]
        return N // math.gcd(N, *units) if units else 1


def enumerate_dual(A: FiniteAbelian) -> list[Character]:
    """All |A| characters in lexicographic coefficient order."""
    return [Character(A, tuple(int(c) for c in row)) for row in A.elements()]


def _char_units(A: FiniteAbelian, coeffs: np.ndarray) -> np.ndarray:
    """Coefficients rescaled so that chi(e_j) = units_j / exponent."""
    N = A.exponent
    return coeffs * (N // A.moduli())


class AutoAction:
    """A group acting on a finite abelian group through integer matrices.

    ``mats[g]`` is the matrix of generator g acting on column vectors,
    reduced coordinate-wise modulo the invariant factors.
    """

    def __init__(self, A: FiniteAbelian, mats: Sequence, group=None):
        self.A = A
        self.mats = [np.array(m, dtype=np.int64).reshape(A.rank, A.rank) for m in mats]
        self.group = group
        n = A.moduli()
        for g, M in enumerate(self.mats):
            # x_j is only defined mod n_j, so M_ij * n_j must vanish mod n_i
            if A.rank and np.any((M * n[None, :]) % n[:, None]):
                raise InvalidAction(f"matrix {g} is not well defined on {A}")
        self._perms = [self._perm(M) for M in self.mats]
        for g, p in enumerate(self._perms):
            if len(np.unique(p)) != A.order:
                raise InvalidAction(f"matrix {g} is not a bijection of {A}")

    def _perm(self, M: np.ndarray) -> np.ndarray:
        E = self.A.elements()
        return self.A.index(self.image(M, E))

    def image(self, M: np.ndarray, xs: np.ndarray) -> np.ndarray:
        if not self.A.rank:
            return xs
        return (xs @ M.T) % self.A.moduli()

    def apply(self, g: int, x: Sequence[int]) -> tuple:
        out = self.image(self.mats[g], np.array([x], dtype=np.int64))[0]
        return tuple(int(c) for c in out)

    def perm(self, g: int) -> np.ndarray:
        """Generator g as a permutation of element indices."""
        return self._perms[g]

    def inverse_perm(self, g: int) -> np.ndarray:
        p = self._perms[g]
        inv = np.empty_like(p)
        inv[p] = np.arange(len(p))
        return inv

    def dual_apply(self, g: int, chi: Character) -> Character:
        """(g chi)(x) = chi(g^-1 x)."""
        A = self.A
        E = A.elements()
        inv = self.inverse_perm(g)
        coeffs = []
        for j, n in enumerate(A.factors):
            ej = A.index(np.eye(A.rank, dtype=np.int64)[j:j + 1])[0]
            val = chi(E[inv[ej]])
            coeffs.append(int(val.value * n))
        return Character(A, tuple(coeffs))

    @classmethod
    def parse(cls, A: FiniteAbelian, text: str) -> "AutoAction":
        """Integer matrices, one row per line, ``--`` between generators."""
        mats, cur = [], []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("--"):
                if cur:
                    mats.append(cur)
                cur = []
                continue
            cur.append([int(c) for c in line.split()])
        if cur:
            mats.append(cur)
        return cls(A, mats)


def fixed_counts(A: FiniteAbelian, act: AutoAction) -> tuple[int, int]:
    """(# elements fixed by every generator, # characters fixed by the dual action)."""
    E = A.elements()
    fixed_el = np.ones(A.order, dtype=bool)
    for g in range(len(act.mats)):
        fixed_el &= act.perm(g) == np.arange(A.order)
    # chi is fixed iff chi(M e_j) = chi(e_j) for every basis vector e_j
    N = A.exponent
    units = _char_units(A, E)
    fixed_ch = np.ones(A.order, dtype=bool)
    for M in act.mats:
        if A.rank:
            moved = (units @ M) % N
            fixed_ch &= np.all(moved == units % N, axis=1)
    return int(fixed_el.sum()), int(fixed_ch.sum())


@dataclass
class DualMap:
    """xi* : chi -> chi o xi^-1 as a table over the dual groups."""

    source: FiniteAbelian
    target: FiniteAbelian
    table: dict

    def __call__(self, chi: Character) -> Character:
        return self.table[chi.coeffs]


def _hom_perm(xi: np.ndarray, A: FiniteAbelian, B: FiniteAbelian) -> np.ndarray:
    nA, nB = A.moduli(), B.moduli()
    if np.any((xi * nA[None, :]) % nB[:, None]):
        raise NotIsomorphism("matrix does not define a homomorphism between the given groups")
    E = A.elements()
    return B.index((E @ xi.T) % nB)


def dual_conjugacy_transport(xi: Sequence, act: AutoAction, act2: AutoAction) -> DualMap:
    """Transport characters along an intertwining isomorphism xi: A -> A'.

    Checks by brute force that xi is a bijective homomorphism with
    xi(M_g x) = M'_g xi(x), then returns xi* and verifies
    xi*(g chi) = g (xi* chi) for every generator and character.
    """
    A, B = act.A, act2.A
    if len(act.mats) != len(act2.mats):
        raise NotIntertwining("actions have different numbers of generators", None)
    xi = np.array(xi, dtype=np.int64).reshape(B.rank, A.rank)
    if A.order != B.order:
        raise NotIsomorphism("groups of different order")
    p = _hom_perm(xi, A, B)
    if len(np.unique(p)) != A.order:
        raise NotIsomorphism("xi is not injective")
    E = A.elements()
    for g in range(len(act.mats)):
        lhs = p[act.perm(g)]
        rhs = act2.perm(g)[p]
        bad = np.nonzero(lhs != rhs)[0]
        if len(bad):
            x = tuple(int(c) for c in E[bad[0]])
            raise NotIntertwining(f"xi(g{g} x) != g{g} xi(x) at x = {x}", (g, x))
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p))
    basis_idx = B.index(np.eye(B.rank, dtype=np.int64)) if B.rank else np.zeros(0, dtype=np.int64)
    pre = E[inv[basis_idx]]  # xi^-1 e'_j
    table = {}
    for chi in enumerate_dual(A):
        coeffs = tuple(int(chi(x).value * n) for x, n in zip(pre, B.factors))
        table[chi.coeffs] = Character(B, coeffs)
    dual = DualMap(A, B, table)
    for g in range(len(act.mats)):
        for chi in enumerate_dual(A):
            if dual(act.dual_apply(g, chi)) != act2.dual_apply(g, dual(chi)):
                raise NotIntertwining("dual map fails to intertwine", (g, chi.coeffs))
    return dual


# ---------------------------------------------------------------------------
# toral automorphisms


def charpoly(M: Sequence[Sequence[int]]) -> IntPoly:
    """Characteristic polynomial det(xI - M) by Faddeev-LeVerrier, exactly."""
    n = len(M)
    A = [[Fraction(c) for c in row] for row in M]
    coeffs = [Fraction(1)]  # leading first
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A (M_{k-1} + c_{k-1} I)
        prev = [[Mk[i][j] + (coeffs[-1] if i == j else 0) for j in range(n)] for i in range(n)]
        Mk = [[sum(A[i][t] * prev[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        c = -sum(Mk[i][i] for i in range(n)) / k
        coeffs.append(c)
    return IntPoly([int(c) for c in reversed(coeffs)])


def _det(M) -> int:
    cp = charpoly(M)
    n = len(M)
    return int((-1) ** n * cp.coeffs[0]) if cp.coeffs else 0


def _poly_at_matrix(p: IntPoly, M: list[list[int]]) -> list[list[int]]:
    n = len(M)
    out = [[0] * n for _ in range(n)]
    for c in reversed(p.coeffs):
        out = [[sum(out[i][t] * M[t][j] for t in range(n)) + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return out


def _integer_kernel_vector(K: list[list[int]]) -> tuple[int, ...] | None:
    """A primitive integer vector in the rational kernel of K (first free column)."""
    n = len(K[0])
    rows = [[Fraction(c) for c in r] for r in K]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [c / rows[r][col] for c in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    f = free[0]
    vec = [Fraction(0)] * n
    vec[f] = Fraction(1)
    for i, col in enumerate(pivots):
        vec[col] = -rows[i][f]
    den = math.lcm(*(v.denominator for v in vec))
    ints = [int(v * den) for v in vec]
    g = math.gcd(*ints)
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class ErgodicityVerdict:
    ergodic: bool
    charpoly: IntPoly
    k: int | None = None
    witness: tuple | None = None
    orbit_size: int | None = None

    def to_json(self) -> str:
        out = {"verdict": "Ergodic" if self.ergodic else "NotErgodic", "charpoly": self.charpoly.to_text()}
        if not self.ergodic:
            out.update(k=self.k, witness=list(self.witness) if self.witness else None, orbit_size=self.orbit_size)
        return json.dumps(out)


def toral_ergodicity(M: Sequence[Sequence[int]]) -> ErgodicityVerdict:
    """Ergodic iff the characteristic polynomial has no cyclotomic factor.

    When Phi_k divides it, a nonzero integer vector v with Phi_k(M^T) v = 0
    has a finite orbit under the dual action M^T; it is reported when its
    sup-norm is at most 1000.
    """
    M = [[int(c) for c in row] for row in M]
    if abs(_det(M)) != 1:
        raise NotUnimodular(f"det = {_det(M)}; not an automorphism of the torus")
    cp = charpoly(M)
    k = cyclotomic_factor(cp, cp.degree)
    if k is None:
        return ErgodicityVerdict(True, cp)
    Mt = [list(r) for r in zip(*M)]
    v = _integer_kernel_vector(_poly_at_matrix(cyclotomic_poly(k), Mt))
    if v is None or max(abs(c) for c in v) > WITNESS_NORM_CAP:
        return ErgodicityVerdict(False, cp, k)
    orbit, cur = 1, v
    while True:
        cur = tuple(sum(Mt[i][j] * cur[j] for j in range(len(cur))) for i in range(len(cur)))
        if cur == v:
            break
        orbit += 1
    return ErgodicityVerdict(False, cp, k, v, orbit)


def parse_matrix(text: str) -> list[list[int]]:
    """``"2 1 / 1 1"`` or one row per line."""
    rows = [r for r in text.replace("\n", "/").split("/") if r.strip()]
    return [[int(c) for c in r.split()] for r in rows]


def unit_action(n: int, u: int) -> AutoAction:
    """x -> u x on Z/n."""
    return AutoAction(FiniteAbelian([n]), [[[u]]])


__all__ = [
    "FiniteAbelian",
    "Character",
    "AutoAction",
    "DualMap",
    "ErgodicityVerdict",
    "enumerate_dual",
    "fixed_counts",
    "dual_conjugacy_transport",
    "charpoly",
    "toral_ergodicity",
    "parse_matrix",
    "unit_action",
]
