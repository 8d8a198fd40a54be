"""Sequence constructions on almost invariant vectors.

* ``orthogonalize`` turns a sequence of almost invariant unit vectors into
  an orthonormal one while controlling the invariance defect.
* ``scale_and_witness`` rescales an orthonormal sequence by its defects
  and builds the vector w with <w, w_n> = 1/2 for every n.
* ``sparsify_weak_null`` extracts a subsequence whose translates are
  nearly orthogonal at the rate 2^(-n^2).

Finite inputs cannot certify the analytic hypotheses (weak convergence,
defects tending to zero), so a failed search surfaces as a typed error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    DegenerateProjection,
    NoAdmissibleIndex,
    SelectionFailed,
    SubsequenceExhausted,
)
from .exactalg import fraction_sqrt
from .groups import GenMeasure, ZPow
from .reps import DirectSum, MatrixRep, Regular, RepSpec, VectorH, inner, invariance_defect

UNIT_TOL = 1e-10
PROJ_TOL = 1e-8


@dataclass
class AlmostInvSeq:
    """Unit vectors together with their defects under one measure."""

    rep: RepSpec
    mu: GenMeasure
    vectors: list
    defects: list = field(default_factory=list)

    def __post_init__(self):
        for i, v in enumerate(self.vectors):
            n2 = v.norm2()
            ok = n2 == 1 if isinstance(n2, Fraction) else abs(float(n2) - 1) <= 2 * UNIT_TOL
            if not ok:
                raise ValueError(f"vector {i} is not a unit vector (norm^2 = {float(n2)})")
        if not self.defects:
            self.defects = [invariance_defect(self.rep, self.mu, v) for v in self.vectors]

    def __len__(self):
        return len(self.vectors)


@dataclass(frozen=True)
class StepRecord:
    """One accepted orthogonalization step: output w_{k+1} built from v_m."""

    k: int
    m: int
    bounds: dict
    defects: dict

    def holds(self) -> bool:
        return all(self.defects[g] <= self.bounds[g] for g in self.defects)


@dataclass
class OrthoResult:
    seq: AlmostInvSeq
    steps: list
    source: list  # index into the input sequence for every output vector


def step_bound(k: int, source_defect: float) -> float:
    """(1 - 1/sqrt k)^(-1) (||g v_m - v_m|| + 2/sqrt k); infinite at k = 1."""
    if k <= 1:
        return math.inf
    s = 1 / math.sqrt(k)
    return (source_defect + 2 * s) / (1 - s)


def orthogonalize(seq: AlmostInvSeq, length: int | None = None) -> OrthoResult:
    """Greedy orthonormalization with the smallest admissible index at each step.

    w_1 = v_1. Given w_1..w_k, scan v_m for m past the previously used
    index (and past k) until |<v_m, w_i>| < 1/k for all i <= k, then
    project out span(w_1..w_k) and normalize. Runs until the input is
    exhausted; with ``length`` set, fewer outputs raise NoAdmissibleIndex.
    Indices in the records are 1-based, matching v_1, v_2, ...
    """
    vs = [v.to_float() if v.exact else v for v in seq.vectors]
    if not vs:
        raise NoAdmissibleIndex(0)
    ws = [vs[0]]
    source = [0]
    steps: list[StepRecord] = []
    e = seq.rep.group.identity()
    gens = [h for h in seq.mu.elements() if h != e]
    while length is None or len(ws) < length:
        k = len(ws)
        start = max(source[-1] + 1, k)  # 0-based position of v_{m}, m > k
        m = None
        for j in range(start, len(vs)):
            if all(abs(inner(vs[j], w)) < 1 / k for w in ws):
                m = j
                break
        if m is None:
            if length is not None:
                raise NoAdmissibleIndex(k)
            break
        u = vs[m]
        for _ in range(2):
            for w in ws:
                u = u - w * inner(u, w)
        nu = u.norm()
        if nu <= PROJ_TOL:
            raise DegenerateProjection(f"v_{m + 1} lies in the span of the previous outputs")
        w_new = u * (1 / nu)
        src = seq.defects[m].defects
        bounds = {g: step_bound(k, float(src[g])) for g in gens}
        defects = {g: float((seq.rep.apply(g, w_new) - w_new).norm()) for g in gens}
        steps.append(StepRecord(k, m + 1, bounds, defects))
        ws.append(w_new)
        source.append(m)
    out = AlmostInvSeq(seq.rep, seq.mu, ws)
    return OrthoResult(out, steps, source)


# ---------------------------------------------------------------------------
# scaling and witness


@dataclass
class WitnessBundle:
    """w_n = v_n / sqrt(eps_n) and w = (1/2) sum eps_n w_n.

    If a selected vector is invariant, ``invariant`` holds it and the other
    fields are empty: sigma of that vector is already a nonzero fixed point.
    """

    epsilons: list
    scaled: list
    witness: VectorH | None
    indices: list
    invariant: VectorH | None = None

    @property
    def N(self) -> int:
        return len(self.scaled)

    def pairings(self) -> list:
        return [inner(self.witness, wn) for wn in self.scaled]

    def check(self, tol: float = 1e-9) -> bool:
        """<w, w_n> = 1/2: exactly in rational mode, within ``tol`` otherwise."""
        half = Fraction(1, 2)
        for p in self.pairings():
            if isinstance(p, Fraction):
                if p != half:
                    return False
            elif abs(float(p) - 0.5) > tol:
                return False
        return True


def _exact_sqrt(eps) -> Fraction | None:
    return fraction_sqrt(eps) if isinstance(eps, Fraction) else None


def scale_and_witness(seq: AlmostInvSeq, N: int) -> WitnessBundle:
    """Pick the first v with eps < 2^-n for n = 1..N, in order, and build the bundle.

    eps is the max defect of the vector. Rational mode needs every
    selected eps to have a rational square root; otherwise the bundle is
    computed in floats.
    """
    chosen, eps_list = [], []
    pos = 0
    for n in range(1, N + 1):
        limit = Fraction(1, 2**n)
        while pos < len(seq):
            eps = seq.defects[pos].max_defect
            if eps == 0:
                v = seq.vectors[pos]
                return WitnessBundle([], [], None, [pos], invariant=v)
            ok = eps < limit if isinstance(eps, Fraction) else float(eps) < float(limit)
            pos += 1
            if ok:
                chosen.append(pos - 1)
                eps_list.append(eps)
                break
        else:
            raise SubsequenceExhausted(f"only {len(chosen)} of {N} vectors satisfy eps_n < 2^-n")
    roots = [_exact_sqrt(e) for e in eps_list]
    vecs = [seq.vectors[i] for i in chosen]
    exact = all(r is not None for r in roots) and all(v.exact for v in vecs)
    if exact:
        scaled = [v / r for v, r in zip(vecs, roots)]
        witness = VectorH({}, True)
        for e, wn in zip(eps_list, scaled):
            witness = witness + wn * (e / 2)
    else:
        eps_list = [float(e) for e in eps_list]
        vecs = [v.to_float() if v.exact else v for v in vecs]
        scaled = [v * (1 / math.sqrt(e)) for v, e in zip(vecs, eps_list)]
        witness = VectorH({}, False)
        for e, wn in zip(eps_list, scaled):
            witness = witness + wn * (e / 2)
    return WitnessBundle(eps_list, scaled, witness, chosen)


# ---------------------------------------------------------------------------
# weak-null sparsification


@dataclass
class SparsifyResult:
    indices: list
    vector: VectorH
    checks: list  # (n, j, g, |<v_{k_n}, g w_j>|) with 1-based n, j

    def verify(self) -> bool:
        return all(_below(val, n) for n, _, _, val in self.checks)


def _below(val, n: int) -> bool:
    if isinstance(val, Fraction):
        return val < Fraction(1, 2 ** (n * n))
    val = abs(float(val))
    return val == 0.0 or math.log2(val) < -(n * n)


def sparsify_weak_null(seq: Sequence[VectorH], elems: Sequence, rep: RepSpec, N: int) -> SparsifyResult:
    """Select k_1 < k_2 < ... < k_N with |<v_{k_n}, g w_j>| < 2^(-n^2).

    w_j = v_{k_j}; g ranges over the supplied elements and their inverses.
    Indices are 0-based positions in ``seq``; k_1 = 0. Returns the
    selection and v = sum_n 2^-n w_n.
    """
    if not seq:
        raise SelectionFailed(1)
    grp = rep.group
    gs = []
    for g in elems:
        g = grp.coerce(g)
        for h in (g, grp.inv(g)):
            if h not in gs:
                gs.append(h)
    picked = [0]
    translates = [[rep.apply(g, seq[0]) for g in gs]]
    checks = []
    for n in range(2, N + 1):
        found = None
        for k in range(picked[-1] + 1, len(seq)):
            vals = []
            for j, trs in enumerate(translates, start=1):
                for g, t in zip(gs, trs):
                    vals.append((n, j, g, abs(inner(seq[k], t))))
            if all(_below(val, n) for *_, val in vals):
                found = k
                checks += vals
                break
        if found is None:
            raise SelectionFailed(n)
        picked.append(found)
        translates.append([rep.apply(g, seq[found]) for g in gs])
    exact = all(seq[k].exact for k in picked)
    v = VectorH({}, exact)
    for n, k in enumerate(picked, start=1):
        v = v + seq[k] * (Fraction(1, 2**n) if exact else 2.0**-n)
    return SparsifyResult(picked, v, checks)


# ---------------------------------------------------------------------------
# named sequence families


def windows(N: int) -> tuple[RepSpec, list]:
    """v_n = n^(-1/2) 1_[0,n) in l^2(Z), n = 1..N."""
    rep = Regular(ZPow(1))
    vecs = [VectorH({(i,): 1 / math.sqrt(n) for i in range(n)}, False) for n in range(1, N + 1)]
    return rep, vecs


def basis(N: int) -> tuple[RepSpec, list]:
    """Standard basis e_0..e_{N-1} of l^2(Z), exact."""
    rep = Regular(ZPow(1))
    return rep, [VectorH.basis((n,)) for n in range(N)]


def _four_squares(M: int) -> tuple[int, int, int, int]:
    """Some (a, b, c, d) with a^2 + b^2 + c^2 + d^2 = M."""
    def two(m):
        for x in range(math.isqrt(m), -1, -1):
            y2 = m - x * x
            y = math.isqrt(y2)
            if y * y == y2:
                return x, y
            if x * x < y2:
                return None
        return None

    for a in range(math.isqrt(M), -1, -1):
        r = M - a * a
        for b in range(math.isqrt(r), -1, -1):
            t = two(r - b * b)
            if t is not None:
                return a, b, *t
    raise ValueError(M)  # pragma: no cover - Lagrange


def dyadic_family(N: int) -> tuple[RepSpec, GenMeasure, list]:
    """Orthonormal exact vectors with eps_n = 4^-n, n = 1..N.

    Z acts on N blocks of R^5 through diag(-1, 1, 1, 1, 1). The n-th
    vector lives in block n with first coordinate 2^(-2n-1); the rest of
    its unit norm is split over four rational coordinates.
    """
    from .groups import lazy_uniform

    group = ZPow(1)
    flip = [[-1 if i == j == 0 else int(i == j) for j in range(5)] for i in range(5)]
    rep = DirectSum([MatrixRep(group, [flip]) for _ in range(N)])
    vecs = []
    for n in range(1, N + 1):
        den = 2 ** (2 * n + 1)
        rest = _four_squares(den * den - 1)
        coords = [Fraction(1, den)] + [Fraction(c, den) for c in rest]
        vecs.append(VectorH({5 * (n - 1) + i: c for i, c in enumerate(coords)}, True))
    return rep, lazy_uniform(group), vecs


def parse_sequence(text: str):
    """``windows:N``, ``basis:N``, or blocks of vector files separated by blank lines."""
    from .reps import parse_vector

    text = text.strip()
    name, _, arg = text.partition(":")
    if name == "windows" and arg.isdigit():
        return windows(int(arg))
    if name == "basis" and arg.isdigit():
        return basis(int(arg))
    blocks = [b for b in text.split("\n\n") if b.strip()]
    return None, [parse_vector(b) for b in blocks]


__all__ = [
    "AlmostInvSeq",
    "StepRecord",
    "OrthoResult",
    "WitnessBundle",
    "SparsifyResult",
    "step_bound",
    "orthogonalize",
    "scale_and_witness",
    "sparsify_weak_null",
    "windows",
    "basis",
    "dyadic_family",
    "parse_sequence",
]
