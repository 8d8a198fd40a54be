"""Additive conjugacy of the irreducible representations n -> z^n of Z.

Two such representations are additive conjugates exactly when z and w are
both transcendental, or both algebraic with the same minimal polynomial.
Algebraic unit numbers are given by their minimal polynomial plus a
rational isolating rectangle; root counting inside rectangles is exact
(argument principle evaluated with Sturm sequences on the four edges).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .errors import BoundaryRoot, InvalidSelector, NotConjugate, TranscendentalInput
from .exactalg import (
    IntPoly,
    NumberFieldElem,
    cyclotomic_index,
    cyclotomic_poly,
    poly_is_irreducible,
    poly_normalize,
    qp,
    qp_add,
    qp_deriv,
    qp_eval,
    qp_gcd,
    qp_mul,
    qp_primitive,
    qp_rem,
    qp_squarefree,
    qp_sub,
)

Rect = tuple[Fraction, Fraction, Fraction, Fraction]

REFINE_WIDTH = 1e-12
_HALF = Fraction(1, 2**42)  # half-width of refined boxes, width < 1e-12


# ---------------------------------------------------------------------------
# exact root counting


def _sturm_sequence(f) -> list[tuple[int, ...]]:
    """Sturm sequence of a squarefree polynomial, each term made primitive."""
    seq = [qp_primitive(f, keep_sign=True)]
    d = qp_primitive(qp_deriv(f), keep_sign=True)
    if not d:
        return seq
    seq.append(d)
    while True:
        r = qp_rem(tuple(map(Fraction, seq[-2])), tuple(map(Fraction, seq[-1])))
        if not r:
            break
        seq.append(qp_primitive(tuple(-c for c in r), keep_sign=True))
    return seq


def _variations(seq, t: Fraction) -> int:
    count, last = 0, 0
    for s in seq:
        v = qp_eval(s, t)
        if v:
            sgn = 1 if v > 0 else -1
            if last and sgn != last:
                count += 1
            last = sgn
    return count


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _edge_polys(p: IntPoly, start: tuple[Fraction, Fraction], end: tuple[Fraction, Fraction]):
    """Real and imaginary parts of p(start + t*(end - start)) as polynomials in t."""
    ar, ai = start
    dr, di = end[0] - start[0], end[1] - start[1]
    lr, li = qp((ar, dr)), qp((ai, di))
    R, I = (), ()
    for c in reversed(p.coeffs):
        R, I = qp_sub(qp_mul(R, lr), qp_mul(I, li)), qp_add(qp_mul(R, li), qp_mul(I, lr))
        R = qp_add(R, (Fraction(c),))
    return R, I


_SPLITS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(2, 5), Fraction(3, 5),
           Fraction(3, 7), Fraction(4, 7), Fraction(5, 11), Fraction(6, 11))


def _edge_positions(R, I) -> list[int]:
    """Positions (0..7, counterclockwise in half-quadrants) of p at sample points.

    Between consecutive samples at most one of R, I changes sign, so the
    image moves by at most one quadrant.
    """
    comps = [f for f in (R, I) if f]
    g = qp_gcd(R, I) if (R and I) else (R or I)
    if len(g) > 1:
        sg = _sturm_sequence(qp_squarefree(g))
        if qp_eval(g, Fraction(0)) == 0 or _variations(sg, Fraction(0)) - _variations(sg, Fraction(1)) > 0:
            raise BoundaryRoot("polynomial vanishes on the rectangle boundary")
    sturms = [_sturm_sequence(qp_squarefree(f)) for f in comps]
    at_one = sum(1 for f in comps if qp_eval(f, Fraction(1)) == 0)

    def count(a: Fraction, b: Fraction) -> int:
        n = sum(_variations(s, a) - _variations(s, b) for s in sturms)
        if b == 1:
            n -= at_one
        return n

    def ok(t: Fraction) -> bool:
        return all(qp_eval(f, t) != 0 for f in comps)

    def split(a: Fraction, b: Fraction) -> Fraction:
        for frac in _SPLITS:
            m = a + (b - a) * frac
            if ok(m):
                return m
        raise InvalidSelector("could not find a split point")  # pragma: no cover

    leaves: list[list] = []

    def rec(a, b):
        n = count(a, b)
        if n <= 1:
            leaves.append([a, b, n])
        else:
            m = split(a, b)
            rec(a, m)
            rec(m, b)

    m0 = split(Fraction(0), Fraction(1))
    rec(Fraction(0), m0)
    rec(m0, Fraction(1))
    while leaves[0][2]:
        a, b, _ = leaves.pop(0)
        m = split(a, b)
        leaves[:0] = [[a, m, count(a, m)], [m, b, count(m, b)]]
    while leaves[-1][2]:
        a, b, _ = leaves.pop()
        m = split(a, b)
        leaves += [[a, m, count(a, m)], [m, b, count(m, b)]]
    samples = [leaf[1] for leaf in leaves[:-1]]
    out = []
    for t in samples:
        sr = _sign(qp_eval(R, t)) if R else 0
        si = _sign(qp_eval(I, t)) if I else 0
        out.append(_POSITION[(sr, si)])
    return out


_POSITION = {(1, 0): 0, (1, 1): 1, (0, 1): 2, (-1, 1): 3, (-1, 0): 4, (-1, -1): 5, (0, -1): 6, (1, -1): 7}


def count_roots_in_rect(p: IntPoly, rect: Sequence) -> int:
    """Number of roots (with multiplicity) of p strictly inside the rectangle.

    ``rect`` is ``(x0, x1, y0, y1)``. Raises BoundaryRoot if p vanishes on
    the boundary.
    """
    x0, x1, y0, y1 = (Fraction(v) for v in rect)
    if not (x0 < x1 and y0 < y1):
        raise InvalidSelector("degenerate rectangle")
    corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    positions: list[int] = []
    for i in range(4):
        positions += _edge_positions(*_edge_polys(p, corners[i], corners[(i + 1) % 4]))
    total = 0
    for a, b in zip(positions, positions[1:] + positions[:1]):
        d = (b - a) % 8
        if d > 4:
            d -= 8
        if abs(d) > 2:  # pragma: no cover - excluded by construction
            raise InvalidSelector("argument tracking lost a quadrant")
        total += d
    if total % 8:
        raise InvalidSelector("winding number is not an integer")  # pragma: no cover
    return total // 8


def _mp_to_fraction(x) -> Fraction:
    return Fraction(int(mpmath.nint(x * 2**60)), 2**60)


def _box(center: complex | tuple, half: Fraction = _HALF) -> Rect:
    if isinstance(center, tuple):
        cx, cy = center
    else:
        cx, cy = _mp_to_fraction(mpmath.re(center)), _mp_to_fraction(mpmath.im(center))
    return (cx - half, cx + half, cy - half, cy + half)


def _inside(r: Rect, outer: Rect) -> bool:
    return outer[0] <= r[0] and r[1] <= outer[1] and outer[2] <= r[2] and r[3] <= outer[3]


def refine_root(p: IntPoly, rect: Rect) -> Rect:
    """Shrink an isolating rectangle to width below 1e-12.

    A numeric approximation proposes the small box; the box is accepted
    only after an exact count confirms it holds the root.
    """
    if max(rect[1] - rect[0], rect[3] - rect[2]) <= REFINE_WIDTH:
        return rect
    with mpmath.workdps(50):
        roots = mpmath.polyroots(list(reversed(p.coeffs)), maxsteps=400, extraprec=300)
        lo = [mpmath.mpf(v.numerator) / v.denominator for v in rect]
        cands = [r for r in roots
                 if lo[0] < mpmath.re(r) < lo[1] and lo[2] < mpmath.im(r) < lo[3]]
        for r in cands:
            for shift in (0, 1, -1, 2):
                box = _box(r)
                box = (box[0] + shift * _HALF / 3, box[1] + shift * _HALF / 3, box[2], box[3])
                if not _inside(box, rect):
                    continue
                try:
                    if count_roots_in_rect(p, box) == 1:
                        return box
                except BoundaryRoot:
                    continue
    return _bisect_refine(p, rect)


def _bisect_refine(p: IntPoly, rect: Rect) -> Rect:
    x0, x1, y0, y1 = rect
    while max(x1 - x0, y1 - y0) > REFINE_WIDTH:
        for fx in (Fraction(1, 2), Fraction(1, 3), Fraction(3, 5)):
            mx, my = x0 + (x1 - x0) * fx, y0 + (y1 - y0) * fx
            try:
                for cand in ((x0, mx, y0, my), (mx, x1, y0, my), (x0, mx, my, y1), (mx, x1, my, y1)):
                    if count_roots_in_rect(p, cand) == 1:
                        x0, x1, y0, y1 = cand
                        break
                else:
                    continue
                break
            except BoundaryRoot:
                continue
        else:  # pragma: no cover
            raise InvalidSelector("bisection refinement stalled")
    return (x0, x1, y0, y1)


def _straddles_unit_circle(r: Rect) -> bool:
    x0, x1, y0, y1 = r
    nx = Fraction(0) if x0 <= 0 <= x1 else min(abs(x0), abs(x1))
    ny = Fraction(0) if y0 <= 0 <= y1 else min(abs(y0), abs(y1))
    far = max(x0 * x0, x1 * x1) + max(y0 * y0, y1 * y1)
    return nx * nx + ny * ny <= 1 <= far


def _is_irreducible(m: IntPoly) -> bool:
    if cyclotomic_index(m) is not None:
        return True
    return poly_is_irreducible(m)


# ---------------------------------------------------------------------------
# unit-modulus numbers


@dataclass(frozen=True)
class UnitAlgebraic:
    """An algebraic number of modulus one, or a transcendental tag.

    Algebraic values carry their normalized minimal polynomial and a
    rectangle with rational corners isolating the chosen root; after
    construction the rectangle is refined to width below 1e-12.
    """

    minpoly: IntPoly | None
    rect: Rect | None
    label: str | None = None
    approx: complex | None = None

    @classmethod
    def algebraic(cls, minpoly: IntPoly, rect: Iterable) -> "UnitAlgebraic":
        rect = tuple(Fraction(v) for v in rect)
        if len(rect) != 4:
            raise InvalidSelector("rectangle needs four corners x0,x1,y0,y1")
        if minpoly.degree < 1 or poly_normalize(minpoly) != minpoly:
            raise InvalidSelector(f"{minpoly} is not a normalized polynomial")
        if not _is_irreducible(minpoly):
            raise InvalidSelector(f"{minpoly} is reducible")
        n = count_roots_in_rect(minpoly, rect)
        if n != 1:
            raise InvalidSelector(f"rectangle holds {n} roots, expected exactly one")
        fine = refine_root(minpoly, rect)
        if not _straddles_unit_circle(fine):
            raise InvalidSelector("selected root is not on the unit circle")
        centre = complex(float((fine[0] + fine[1]) / 2), float((fine[2] + fine[3]) / 2))
        return cls(minpoly, fine, None, centre)

    @classmethod
    def root_of_unity(cls, n: int, a: int = 1) -> "UnitAlgebraic":
        """exp(2 pi i a / n); its isolation is certified by the known root spacing."""
        order = n // math.gcd(a % n, n)
        m = cyclotomic_poly(order)
        with mpmath.workdps(50):
            z = mpmath.expjpi(mpmath.mpf(2 * (a % n)) / n)
            box = _box(z)
        # roots of Phi_order are at least 2 sin(pi/order) apart, far above the box size
        return cls(m, box, None, complex(z))

    @classmethod
    def transcendental(cls, label: str, approx: complex | None = None) -> "UnitAlgebraic":
        return cls(None, None, label, approx)

    @classmethod
    def parse(cls, text: str) -> "UnitAlgebraic":
        """``alg:<coeffs>:<x0,x1,y0,y1>``, ``trans:<label>`` or ``unity:<n>:<a>``."""
        kind, _, rest = text.strip().partition(":")
        if kind == "trans":
            return cls.transcendental(rest)
        if kind == "unity":
            n, _, a = rest.partition(":")
            return cls.root_of_unity(int(n), int(a or 1))
        if kind == "alg":
            coeffs, _, rect = rest.rpartition(":")
            corners = [Fraction(v) for v in rect.split(",")]
            return cls.algebraic(IntPoly.from_text(coeffs.strip().strip('"')), corners)
        raise ValueError(f"unrecognised unit number {text!r}")

    @property
    def is_algebraic(self) -> bool:
        return self.minpoly is not None

    def numeric(self) -> complex:
        if self.approx is None:
            raise TranscendentalInput(f"no numeric value attached to {self.label!r}")
        return self.approx

    def field_gen(self) -> NumberFieldElem:
        """z as the class of x in Q[x]/(minpoly)."""
        if not self.is_algebraic:
            raise TranscendentalInput("Q(z) has no finite description for transcendental z")
        return NumberFieldElem.gen(self.minpoly)

    def __str__(self):
        if not self.is_algebraic:
            return f"trans:{self.label}"
        return f"alg:{self.minpoly.to_text()}:" + ",".join(str(c) for c in self.rect)


@dataclass(frozen=True)
class EvalResult:
    residue: NumberFieldElem | None
    is_zero: bool


def eval_at(z: UnitAlgebraic, p: IntPoly) -> EvalResult:
    """p(z) as an element of Q(z); exact zero test by divisibility."""
    if not z.is_algebraic:
        return EvalResult(None, p.is_zero())
    res = NumberFieldElem.from_poly(z.minpoly, p)
    return EvalResult(res, res.is_zero())


def _vanishes(z: UnitAlgebraic, p: IntPoly) -> bool:
    return z.minpoly.divides(p) if z.is_algebraic else p.is_zero()


@dataclass(frozen=True)
class ConjugacyVerdict:
    conjugate: bool
    certificate: IntPoly | None
    reason: str

    def to_json(self) -> str:
        cert = self.certificate.to_text() if self.certificate is not None else self.reason
        return json.dumps({"conjugate": self.conjugate, "certificate": cert})


def decide_conjugacy(z: UnitAlgebraic, w: UnitAlgebraic) -> ConjugacyVerdict:
    """Decide whether n -> z^n and n -> w^n are additive conjugates."""
    if not z.is_algebraic and not w.is_algebraic:
        return ConjugacyVerdict(True, None, "both transcendental")
    if z.is_algebraic and w.is_algebraic and z.minpoly == w.minpoly:
        return ConjugacyVerdict(True, z.minpoly, "shared minimal polynomial")
    # a minimal polynomial vanishing at exactly one of the two
    sep = z.minpoly if z.is_algebraic else w.minpoly
    at_z, at_w = _vanishes(z, sep), _vanishes(w, sep)
    assert at_z != at_w, "separating polynomial failed to separate"
    return ConjugacyVerdict(False, sep, "separating polynomial")


@dataclass(frozen=True)
class XiMap:
    """The field isomorphism Q(z) -> Q(w) sending z to w.

    Both fields are Q[x]/(m) for the shared minimal polynomial m; the map
    keeps residue coefficients and changes which root x is read as.
    """

    modulus: IntPoly
    domain: UnitAlgebraic
    codomain: UnitAlgebraic

    def __call__(self, a) -> NumberFieldElem:
        if isinstance(a, (int, Fraction)):
            return NumberFieldElem.const(self.modulus, a)
        if a.modulus != self.modulus:
            raise ValueError("element does not live in the domain field")
        return NumberFieldElem(self.modulus, a.residue)

    def ratio(self, p: IntPoly, q: IntPoly) -> NumberFieldElem:
        """Image of p(z)/q(z), which is p(w)/q(w)."""
        num = NumberFieldElem.from_poly(self.modulus, p)
        den = NumberFieldElem.from_poly(self.modulus, q)
        return self(num / den)

    def z(self) -> NumberFieldElem:
        return NumberFieldElem.gen(self.modulus)

    def transport(self, coords: Sequence) -> tuple:
        """Coefficient-wise image of a vector with Q(z) coordinates."""
        return tuple(self(c) for c in coords)


def build_xi(z: UnitAlgebraic, w: UnitAlgebraic) -> XiMap:
    if not (z.is_algebraic and w.is_algebraic):
        raise TranscendentalInput("Xi is only constructed between algebraic numbers")
    verdict = decide_conjugacy(z, w)
    if not verdict.conjugate:
        raise NotConjugate(f"{z.minpoly} != {w.minpoly}")
    return XiMap(z.minpoly, z, w)


def minimal_polynomial_unity(n: int, a: int) -> IntPoly:
    return cyclotomic_poly(n // math.gcd(a % n, n))


__all__ = [
    "UnitAlgebraic",
    "XiMap",
    "EvalResult",
    "ConjugacyVerdict",
    "count_roots_in_rect",
    "refine_root",
    "eval_at",
    "decide_conjugacy",
    "build_xi",
]
