"""Exact arithmetic: rationals, integer polynomials, cyclotomics, number fields, torus values.

Rationals are :class:`fractions.Fraction`. Polynomials are stored constant
term first. Rational polynomials used internally are plain tuples of
``Fraction`` with trailing zeros stripped (the zero polynomial is ``()``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath

from .errors import DegreeCapExceeded, DivisionByZero, FactorSearchExhausted

Rational = Fraction

DEGREE_CAP = 24
TORUS_SNAP = 1e-12

_SMALL_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67)


def parse_rational(text: str) -> Fraction:
    """Parse ``"a/b"`` or ``"a"``."""
    return Fraction(text.strip())


# ---------------------------------------------------------------------------
# rational polynomials (tuples of Fraction, constant term first)

QPoly = tuple


def qp(coeffs: Iterable) -> QPoly:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def qp_deg(a: QPoly) -> int:
    return len(a) - 1


def qp_add(a: QPoly, b: QPoly) -> QPoly:
    n = max(len(a), len(b))
    return qp((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def qp_sub(a: QPoly, b: QPoly) -> QPoly:
    n = max(len(a), len(b))
    return qp((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n))


def qp_scale(a: QPoly, c) -> QPoly:
    return qp(x * c for x in a)


def qp_mul(a: QPoly, b: QPoly) -> QPoly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return qp(out)


def qp_divmod(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly]:
    if not b:
        raise DivisionByZero("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(r) <= db:
        return (), qp(r)
    q = [Fraction(0)] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] / lead
        if c:
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] -= c * b[j]
    return qp(q), qp(r[:db])


def qp_rem(a: QPoly, b: QPoly) -> QPoly:
    return qp_divmod(a, b)[1]


def qp_monic(a: QPoly) -> QPoly:
    return qp_scale(a, 1 / a[-1]) if a else ()


def qp_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Monic gcd over the rationals."""
    while b:
        a, b = b, qp_rem(a, b)
    return qp_monic(a)


def qp_ext_gcd(a: QPoly, b: QPoly) -> tuple[QPoly, QPoly, QPoly]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    r0, r1 = a, b
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        q, r = qp_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, qp_sub(s0, qp_mul(q, s1))
        t0, t1 = t1, qp_sub(t0, qp_mul(q, t1))
    if not r0:
        return (), (), ()
    inv = 1 / r0[-1]
    return qp_scale(r0, inv), qp_scale(s0, inv), qp_scale(t0, inv)


def qp_deriv(a: QPoly) -> QPoly:
    return qp(i * a[i] for i in range(1, len(a)))


def qp_eval(a: Sequence, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def qp_squarefree(a: QPoly) -> QPoly:
    g = qp_gcd(a, qp_deriv(a))
    if len(g) <= 1:
        return a
    return qp_divmod(a, g)[0]


def qp_primitive(a: QPoly, keep_sign: bool = False) -> tuple[int, ...]:
    """Primitive integer associate of a rational polynomial.

    The leading coefficient is made positive unless ``keep_sign`` is set, in
    which case only a positive factor is divided out.
    """
    if not a:
        return ()
    den = 1
    for c in a:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if ints[-1] < 0 and not keep_sign:
        g = -g
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# integer polynomials


@dataclass(frozen=True)
class IntPoly:
    """Polynomial with integer coefficients, constant term first."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_text(cls, text: str) -> "IntPoly":
        """``"-1 0 1"`` is x^2 - 1."""
        return cls(int(t) for t in text.split())

    @classmethod
    def x(cls) -> "IntPoly":
        return cls((0, 1))

    def to_text(self) -> str:
        return " ".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def to_q(self) -> QPoly:
        return tuple(Fraction(c) for c in self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "IntPoly") -> "IntPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a, b = self.coeffs, other.coeffs
        return IntPoly((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))

    def __neg__(self) -> "IntPoly":
        return IntPoly(-c for c in self.coeffs)

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + (-other)

    def __mul__(self, other) -> "IntPoly":
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPoly":
        out = IntPoly((1,))
        for _ in range(n):
            out = out * self
        return out

    def derivative(self) -> "IntPoly":
        return IntPoly(i * self.coeffs[i] for i in range(1, len(self.coeffs)))

    def divides(self, other: "IntPoly") -> bool:
        """True iff ``self`` divides ``other`` in Q[x]."""
        if self.is_zero():
            return other.is_zero()
        if abs(self.lc) == 1:
            # monic up to sign: the remainder stays integral
            r = list(other.coeffs)
            b, d, lead = self.coeffs, self.degree, self.lc
            for i in range(len(r) - 1, d - 1, -1):
                c = r[i] * lead
                if c:
                    for j in range(d + 1):
                        r[i - d + j] -= c * b[j]
            return not any(r[:d])
        return not qp_rem(other.to_q(), self.to_q())

    def exact_quotient(self, divisor: "IntPoly") -> "IntPoly":
        q, r = qp_divmod(self.to_q(), divisor.to_q())
        if r or any(c.denominator != 1 for c in q):
            raise ValueError(f"{divisor} does not divide {self} over Z")
        return IntPoly(int(c) for c in q)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                body = mono if a == 1 else f"{a}{mono}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def poly_normalize(p: IntPoly) -> IntPoly:
    """Primitive associate with positive leading coefficient; zero maps to zero."""
    if p.is_zero():
        return p
    g = p.content()
    if p.lc < 0:
        g = -g
    return IntPoly(c // g for c in p.coeffs)


def is_normalized(p: IntPoly) -> bool:
    return p == poly_normalize(p)


# --- arithmetic mod a prime, for degree-pattern filtering -------------------


def _pm_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pm_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    r = list(a)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    if len(r) <= db:
        return [], _pm_trim(r)
    q = [0] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * inv % p
        if c:
            q[i - db] = c
            for j in range(db + 1):
                r[i - db + j] = (r[i - db + j] - c * b[j]) % p
    return _pm_trim(q), _pm_trim(r[:db])


def _pm_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pm_trim(out)


def _pm_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _pm_divmod(a, b, p)[1]
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _pm_powmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _pm_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pm_divmod(_pm_mul(result, base, p), mod, p)[1]
        base = _pm_divmod(_pm_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _pm_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    return _pm_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _ddf_degrees(f: list[int], p: int) -> list[int] | None:
    """Degrees of the irreducible factors of squarefree ``f`` mod ``p``.

    Returns None when ``f`` is not squarefree mod ``p``.
    """
    deriv = _pm_trim([(i * f[i]) % p for i in range(1, len(f))])
    if len(_pm_gcd(f, deriv, p)) > 1 or not deriv:
        return None
    degrees: list[int] = []
    x = [0, 1]
    h = x
    i = 0
    while len(f) - 1 >= 2 * (i + 1):
        i += 1
        h = _pm_powmod(h, p, f, p)
        g = _pm_gcd(f, _pm_sub(h, x, p), p)
        if len(g) > 1:
            degrees += [i] * ((len(g) - 1) // i)
            f = _pm_divmod(f, g, p)[0]
            h = _pm_divmod(h, f, p)[1]
    if len(f) > 1:
        degrees.append(len(f) - 1)
    return degrees


def _subset_sums(degrees: list[int]) -> set[int]:
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return sums


def _possible_factor_degrees(p: IntPoly, primes_wanted: int = 6) -> set[int]:
    n = p.degree
    allowed = set(range(1, n // 2 + 1))
    used = 0
    for q in _SMALL_PRIMES:
        if p.lc % q == 0:
            continue
        f = [c % q for c in p.coeffs]
        degrees = _ddf_degrees(f, q)
        if degrees is None:
            continue
        allowed &= _subset_sums(degrees)
        used += 1
        if not allowed or used >= primes_wanted:
            break
    return allowed


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _has_rational_root(p: IntPoly) -> bool:
    a0, an = p.coeffs[0], p.lc
    if a0 == 0:
        return True
    for num in _divisors(a0):
        for den in _divisors(an):
            for s in (1, -1):
                if p(Fraction(s * num, den)) == 0:
                    return True
    return False


def _find_integer_factor(p: IntPoly, degrees: Iterable[int], budget: int) -> IntPoly | None:
    """Search factors of the given degrees among products of numeric roots.

    Every candidate is confirmed by exact division, so a returned factor is
    certain; ``None`` means no factor of those degrees exists.
    """
    with mpmath.workdps(60):
        roots = mpmath.polyroots(list(reversed(p.coeffs)), maxsteps=400, extraprec=400)
        units: list[list] = []
        used = [False] * len(roots)
        for i, r in enumerate(roots):
            if used[i]:
                continue
            used[i] = True
            if abs(mpmath.im(r)) < mpmath.mpf(10) ** -30 * (1 + abs(r)):
                units.append([mpmath.re(r)])
                continue
            # pair with the closest unused conjugate
            best, best_j = None, None
            for j in range(i + 1, len(roots)):
                if not used[j]:
                    d = abs(roots[j] - mpmath.conj(r))
                    if best is None or d < best:
                        best, best_j = d, j
            used[best_j] = True
            units.append([r, roots[best_j]])
        lc_divs = _divisors(p.lc)
        spent = 0
        for k in sorted(degrees):
            for combo in _unit_combinations(units, k):
                spent += 1
                if spent > budget:
                    raise FactorSearchExhausted(f"factor search budget {budget} exhausted for {p}")
                prod = [mpmath.mpf(1)]
                for r in combo:
                    nxt = [mpmath.mpf(0)] * (len(prod) + 1)
                    for i, c in enumerate(prod):
                        nxt[i] -= c * r
                        nxt[i + 1] += c
                    prod = nxt
                for c in lc_divs:
                    cand = [c * mpmath.re(x) for x in prod]
                    ints = [int(mpmath.nint(x)) for x in cand]
                    if all(abs(x - i) < 1e-8 for x, i in zip(cand, ints)):
                        g = IntPoly(ints)
                        if g.degree == k and g.divides(p):
                            return g
    return None


def _unit_combinations(units: list[list], k: int):
    """Root multisets of total size k built from whole real roots / conjugate pairs."""
    sizes = [len(u) for u in units]

    def rec(start: int, remaining: int, acc: list):
        if remaining == 0:
            yield acc
            return
        for i in range(start, len(units)):
            if sizes[i] <= remaining:
                yield from rec(i + 1, remaining - sizes[i], acc + units[i])

    yield from rec(0, k, [])


def poly_is_irreducible(p: IntPoly, cap: int = DEGREE_CAP, budget: int = 200_000) -> bool:
    """Irreducibility over the rationals by trial factorization.

    Rational-root test, then factor-degree filtering modulo small primes,
    then a bounded search for integer factors of the surviving degrees.
    """
    p = poly_normalize(p)
    d = p.degree
    if d < 1:
        return False
    if d > cap:
        raise DegreeCapExceeded(f"degree {d} exceeds cap {cap}")
    if d == 1:
        return True
    if _has_rational_root(p):
        return False
    if len(qp_gcd(p.to_q(), p.derivative().to_q())) > 1:
        return False
    if d <= 3:
        return True
    allowed = _possible_factor_degrees(p)
    allowed.discard(1)  # no rational roots
    if not allowed:
        return True
    return _find_integer_factor(p, allowed, budget) is None


# ---------------------------------------------------------------------------
# cyclotomic polynomials


def euler_phi(n: int) -> int:
    result, m, q = n, n, 2
    while q * q <= m:
        if m % q == 0:
            while m % q == 0:
                m //= q
            result -= result // q
        q += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> IntPoly:
    """The n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    num = IntPoly([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            num = num.exact_quotient(cyclotomic_poly(d))
    return num


def cyclotomic_index(p: IntPoly) -> int | None:
    """k if the normalized ``p`` equals the k-th cyclotomic polynomial, else None."""
    p = poly_normalize(p)
    if p.degree < 1 or abs(p.coeffs[0]) != 1:
        return None
    d = p.degree
    for k in range(1, 2 * d * d + 1):
        if euler_phi(k) == d and cyclotomic_poly(k) == p:
            return k
    return None


def cyclotomic_factor(p: IntPoly, d: int | None = None) -> int | None:
    """Least k with Phi_k | p among k with phi(k) <= d; None if there is none.

    The search range k <= 2 d^2 is complete because phi(k) >= sqrt(k/2).
    """
    if p.is_zero():
        raise ValueError("cyclotomic_factor of the zero polynomial")
    if d is None:
        d = p.degree
    for k in range(1, 2 * d * d + 1):
        if euler_phi(k) <= d and cyclotomic_poly(k).divides(p):
            return k
    return None


# ---------------------------------------------------------------------------
# number fields Q[x]/(m)


@dataclass(frozen=True)
class NumberFieldElem:
    """Residue class in Q[x]/(modulus); ``modulus`` is assumed irreducible."""

    modulus: IntPoly
    residue: tuple[Fraction, ...]

    def __init__(self, modulus: IntPoly, residue: Iterable = ()):
        d = modulus.degree
        if d < 1:
            raise ValueError("modulus must have degree >= 1")
        r = qp(residue)
        if len(r) > d:
            r = qp_rem(r, modulus.to_q())
        r = tuple(r) + (Fraction(0),) * (d - len(r))
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "residue", r)

    @classmethod
    def gen(cls, modulus: IntPoly) -> "NumberFieldElem":
        """The class of x."""
        return cls(modulus, (0, 1))

    @classmethod
    def const(cls, modulus: IntPoly, c) -> "NumberFieldElem":
        return cls(modulus, (c,))

    @classmethod
    def from_poly(cls, modulus: IntPoly, p) -> "NumberFieldElem":
        coeffs = p.coeffs if isinstance(p, IntPoly) else p
        return cls(modulus, coeffs)

    def _coerce(self, other) -> "NumberFieldElem":
        if isinstance(other, NumberFieldElem):
            if other.modulus != self.modulus:
                raise ValueError("number field elements over different moduli")
            return other
        if isinstance(other, (int, Fraction)):
            return NumberFieldElem(self.modulus, (other,))
        return NotImplemented

    def is_zero(self) -> bool:
        return not any(self.residue)

    def is_rational(self) -> bool:
        return not any(self.residue[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.residue[0]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return NumberFieldElem(self.modulus, (a + b for a, b in zip(self.residue, o.residue)))

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElem(self.modulus, (-a for a in self.residue))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prod = qp_mul(qp(self.residue), qp(o.residue))
        return NumberFieldElem(self.modulus, qp_rem(prod, self.modulus.to_q()))

    __rmul__ = __mul__

    def inverse(self) -> "NumberFieldElem":
        return nf_inverse(self)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * nf_inverse(o)

    def __rtruediv__(self, other):
        return self._coerce(other) * nf_inverse(self)

    def __pow__(self, n: int) -> "NumberFieldElem":
        base = self if n >= 0 else nf_inverse(self)
        out = NumberFieldElem.const(self.modulus, 1)
        for _ in range(abs(n)):
            out = out * base
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.residue[0] == other
        if isinstance(other, NumberFieldElem):
            return self.modulus == other.modulus and self.residue == other.residue
        return NotImplemented

    def __hash__(self):
        return hash((self.modulus, self.residue))

    def evaluate(self, root: complex) -> complex:
        """Numeric value under the embedding x -> root."""
        return complex(qp_eval([float(c) for c in self.residue], root))

    def __repr__(self):
        terms = " ".join(str(c) for c in self.residue)
        return f"NumberFieldElem([{terms}] mod {self.modulus})"


def nf_inverse(a: NumberFieldElem) -> NumberFieldElem:
    """Inverse in Q[x]/(m) via the extended Euclidean algorithm."""
    if a.is_zero():
        raise DivisionByZero("inverse of zero in a number field")
    g, s, _ = qp_ext_gcd(qp(a.residue), a.modulus.to_q())
    if len(g) != 1:
        raise DivisionByZero("element is a zero divisor; modulus is not irreducible")
    return NumberFieldElem(a.modulus, s)


# ---------------------------------------------------------------------------
# the circle group R/Z


@dataclass(frozen=True)
class TorusValue:
    """An element of R/Z, exact (Fraction) or float, stored in [0, 1)."""

    value: Fraction | float
    exact: bool

    @classmethod
    def of(cls, x) -> "TorusValue":
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            return cls(x - math.floor(x), True)
        x = float(x)
        v = x - math.floor(x)
        if v >= 1.0 - TORUS_SNAP:
            v = 0.0
        return cls(v, False)

    def __add__(self, other: "TorusValue") -> "TorusValue":
        return TorusValue.of(self.value + other.value)

    def __neg__(self) -> "TorusValue":
        return TorusValue.of(-self.value)

    def __sub__(self, other: "TorusValue") -> "TorusValue":
        return TorusValue.of(self.value - other.value)

    def is_zero(self, tol: float = 0.0) -> bool:
        if self.exact:
            return self.value == 0
        return min(self.value, 1 - self.value) <= tol

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return str(self.value)


def fraction_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


__all__ = [
    "Rational",
    "IntPoly",
    "NumberFieldElem",
    "TorusValue",
    "poly_normalize",
    "poly_is_irreducible",
    "cyclotomic_poly",
    "cyclotomic_factor",
    "cyclotomic_index",
    "euler_phi",
    "nf_inverse",
    "fraction_sqrt",
    "parse_rational",
]

