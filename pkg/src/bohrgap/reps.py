"""Orthogonal representation backends and vector operations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NotHomomorphism,
    NotOrthogonal,
    NotUnitary,
    UnknownGenerator,
    ZeroVector,
)
from .exactalg import NumberFieldElem, TorusValue, fraction_sqrt, parse_rational
from .groups import FreeGroup, GenMeasure, GroupSpec, PermGroup, ZPow, cayley_ball, gen_name
from .zconj import UnitAlgebraic

ORTHO_TOL = 1e-10
DERIVED_TOL = 1e-9


def _is_exact_scalar(c) -> bool:
    return isinstance(c, (int, Fraction, NumberFieldElem)) and not isinstance(c, bool)


def _canon_exact(c):
    if isinstance(c, NumberFieldElem):
        return c.rational_value() if c.is_rational() else c
    return Fraction(c)


class VectorH:
    """Finitely supported real vector over a countable basis.

    ``entries`` maps basis labels (group elements or integer indices) to
    coefficients. Exact mode stores Fractions, or number-field elements for
    the algebraic rotation backend; float mode stores Python floats. Zero
    coefficients are never stored.
    """

    __slots__ = ("entries", "exact")

    def __init__(self, entries: Mapping | Iterable = (), exact: bool | None = None):
        items = list(entries.items()) if isinstance(entries, Mapping) else list(entries)
        if exact is None:
            exact = all(_is_exact_scalar(c) for _, c in items)
        clean = {}
        for k, c in items:
            c = _canon_exact(c) if exact else float(c)
            if c != 0:
                clean[k] = c
        self.entries = clean
        self.exact = exact

    @classmethod
    def basis(cls, label, exact: bool = True) -> "VectorH":
        return cls({label: Fraction(1) if exact else 1.0}, exact)

    @classmethod
    def from_array(cls, arr, labels: Sequence | None = None) -> "VectorH":
        labels = range(len(arr)) if labels is None else labels
        exact = all(_is_exact_scalar(c) for c in arr)
        return cls(zip(labels, arr), exact)

    def to_array(self, labels: Sequence) -> np.ndarray:
        return np.array([float(self._float(self.entries.get(k, 0))) for k in labels])

    @staticmethod
    def _float(c) -> float:
        if isinstance(c, NumberFieldElem):
            raise TypeError("number-field coordinates need a realification root")
        return float(c)

    def to_float(self) -> "VectorH":
        return VectorH({k: self._float(c) for k, c in self.entries.items()}, exact=False)

    def labels(self) -> list:
        return list(self.entries)

    def __getitem__(self, label):
        return self.entries.get(label, Fraction(0) if self.exact else 0.0)

    def __len__(self):
        return len(self.entries)

    def _check(self, other: "VectorH"):
        if not isinstance(other, VectorH):
            raise TypeError("expected a VectorH")
        if self.exact != other.exact:
            raise DimensionMismatch("exact and float vectors cannot be combined")
        if self.entries and other.entries:
            a, b = next(iter(self.entries)), next(iter(other.entries))
            if type(a) is not type(b):
                raise DimensionMismatch("vectors live over different basis-label spaces")

    def __add__(self, other: "VectorH") -> "VectorH":
        self._check(other)
        out = dict(self.entries)
        for k, c in other.entries.items():
            out[k] = out.get(k, 0) + c
        return VectorH(out, self.exact)

    def __neg__(self) -> "VectorH":
        return VectorH({k: -c for k, c in self.entries.items()}, self.exact)

    def __sub__(self, other: "VectorH") -> "VectorH":
        return self + (-other)

    def __mul__(self, s) -> "VectorH":
        if self.exact and _is_exact_scalar(s):
            return VectorH({k: c * s for k, c in self.entries.items()}, True)
        base = self if not self.exact else self.to_float()
        return VectorH({k: c * float(s) for k, c in base.entries.items()}, False)

    __rmul__ = __mul__

    def __truediv__(self, s) -> "VectorH":
        if self.exact and _is_exact_scalar(s):
            return self * (1 / Fraction(s) if not isinstance(s, NumberFieldElem) else s.inverse())
        return self * (1.0 / float(s))

    def norm2(self):
        return inner(self, self)

    def norm(self) -> float:
        n2 = self.norm2()
        if self.exact:
            r = fraction_sqrt(n2) if isinstance(n2, Fraction) else None
            if r is not None:
                return r
        return math.sqrt(float(n2))

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, VectorH):
            return NotImplemented
        return self.exact == other.exact and self.entries == other.entries

    def allclose(self, other: "VectorH", tol: float = DERIVED_TOL) -> bool:
        keys = set(self.entries) | set(other.entries)
        return all(abs(float(self[k]) - float(other[k])) <= tol for k in keys)

    def __repr__(self):
        mode = "exact" if self.exact else "float"
        return f"VectorH({self.entries!r}, {mode})"


def inner(v: VectorH, w: VectorH):
    """Real inner product; exact for exact vectors."""
    v._check(w)
    if len(w.entries) < len(v.entries):
        v, w = w, v
    total = Fraction(0) if v.exact else 0.0
    for k, c in v.entries.items():
        d = w.entries.get(k)
        if d is not None:
            total = total + c * d
    if isinstance(total, NumberFieldElem):
        if not total.is_rational():
            raise TypeError("inner product of number-field vectors needs realification")
        total = total.rational_value()
    return total


def sigma_eval(v: VectorH, w: VectorH) -> TorusValue:
    """The evaluation <v, w> + Z."""
    return TorusValue.of(inner(v, w))


# ---------------------------------------------------------------------------
# exact matrix helpers (tuples of tuples of Fractions)


def _m_mul(a, b):
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
                       for j in range(len(b[0]))) for i in range(len(a)))


def _m_T(a):
    return tuple(zip(*a))


def _m_eye(d):
    return tuple(tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d))


def _m_pow(a, n: int, d: int):
    if n < 0:
        a, n = _m_T(a), -n
    out = _m_eye(d)
    for _ in range(n):
        out = _m_mul(out, a)
    return out


def _as_exact(m):
    try:
        return tuple(tuple(Fraction(c) if _is_exact_scalar(c) else parse_rational(c) for c in row) for row in m)
    except (TypeError, ValueError, AttributeError):
        return None


# ---------------------------------------------------------------------------
# representation backends


class RepSpec:
    """Base class for orthogonal representation backends."""

    group: GroupSpec
    exact: bool = False

    def apply(self, g, v: VectorH) -> VectorH:
        raise NotImplementedError

    @property
    def finite_dimensional(self) -> bool:
        return True

    def labels(self) -> list:
        raise NotImplementedError

    @property
    def dim(self) -> int:
        return len(self.labels())

    def dense(self, g) -> np.ndarray:
        """Float matrix of pi_g in the basis ``labels()``."""
        labels = self.labels()
        cols = []
        for k in labels:
            cols.append(self.apply(g, VectorH.basis(k, exact=False)).to_array(labels))
        return np.array(cols).T

    def trivial_exact_vector(self, coords) -> VectorH:
        return VectorH(zip(self.labels(), coords))


class Regular(RepSpec):
    """Left regular representation lambda_h delta_x = delta_{hx} on l^2(G).

    With ``radius`` set, the representation is Dirichlet-truncated to the
    Cayley ball of that radius: coefficients pushed outside are dropped.
    """

    def __init__(self, group: GroupSpec, radius: int | None = None):
        self.group = group
        self.radius = radius
        self.exact = True
        self._ball = None

    @property
    def finite_dimensional(self) -> bool:
        return self.group.is_finite

    def labels(self) -> list:
        if self._ball is None:
            if self.radius is None:
                if not self.group.is_finite:
                    raise DimensionMismatch("untruncated regular representation of an infinite group")
                self._ball = self.group.elements()
            else:
                self._ball = cayley_ball(self.group, r=self.radius)
        return self._ball

    def apply(self, g, v: VectorH) -> VectorH:
        g = self.group.coerce(g)
        out = {}
        for x, c in v.entries.items():
            y = self.group.mul(g, x)
            if self.radius is not None and self.group.word_length(y) > self.radius:
                continue
            out[y] = c
        return VectorH(out, v.exact)

    def __repr__(self):
        return f"Regular({self.group}, radius={self.radius})"


class MatrixRep(RepSpec):
    """Finite-dimensional representation given by images of the primary generators.

    ``images`` lists one d x d orthogonal matrix per primary generator of
    ``group``. Entries that are all ints/Fractions (or rational strings)
    give an exact representation, anything else a float one.
    """

    def __init__(self, group: GroupSpec, images: Sequence, exact: bool | None = None, tol: float = ORTHO_TOL):
        self.group = group
        prim = group.primary_generators()
        if len(images) != len(prim):
            raise UnknownGenerator(f"expected {len(prim)} generator images, got {len(images)}")
        exact_images = [_as_exact(m) for m in images] if exact is not False else [None]
        self.exact = all(m is not None for m in exact_images) if exact is None else exact
        if self.exact:
            mats = exact_images
            if any(m is None for m in mats):
                raise ValueError("non-rational entries in an exact representation")
        else:
            mats = [np.asarray(m, dtype=float) for m in images]
        d = len(mats[0])
        for m in mats:
            if len(m) != d or any(len(row) != d for row in m):
                raise DimensionMismatch("generator images must be square of a common size")
        self.d = d
        self.tol = tol
        self.images = tuple(mats)
        for i, m in enumerate(mats):
            if self.exact:
                ok = _m_mul(_m_T(m), m) == _m_eye(d)
            else:
                ok = np.linalg.norm(m.T @ m - np.eye(d)) <= tol
            if not ok:
                raise NotOrthogonal(f"image of generator {gen_name(i + 1)} is not orthogonal")
        self._table = None
        self._check_relations()

    def _eq(self, a, b) -> bool:
        if self.exact:
            return a == b
        return np.linalg.norm(np.asarray(a) - np.asarray(b)) <= self.tol

    def _mul(self, a, b):
        return _m_mul(a, b) if self.exact else a @ b

    def _T(self, a):
        return _m_T(a) if self.exact else a.T

    def _eye(self):
        return _m_eye(self.d) if self.exact else np.eye(self.d)

    def _check_relations(self):
        g = self.group
        if isinstance(g, ZPow):
            for i in range(len(self.images)):
                for j in range(i):
                    a, b = self.images[i], self.images[j]
                    if not self._eq(self._mul(a, b), self._mul(b, a)):
                        raise NotHomomorphism("images of commuting generators do not commute")
        elif isinstance(g, PermGroup):
            table = {g.identity(): self._eye()}
            queue = [g.identity()]
            gens = g.generators()
            prim = g.primary_generators()
            gen_mats = {}
            for s in gens:
                if s in prim:
                    gen_mats[s] = self.images[prim.index(s)]
                else:
                    gen_mats[s] = self._T(self.images[prim.index(g.inv(s))])
            while queue:
                x = queue.pop(0)
                for s in gens:
                    y = g.mul(x, s)
                    my = self._mul(table[x], gen_mats[s])
                    if y in table:
                        if not self._eq(table[y], my):
                            raise NotHomomorphism(f"relation violated at {g.format(y)}")
                    else:
                        table[y] = my
                        queue.append(y)
            self._table = table

    def labels(self) -> list:
        return list(range(self.d))

    def matrix(self, g):
        """pi_g in the native mode (tuple matrix or numpy array)."""
        grp = self.group
        g = grp.coerce(g)
        if self._table is not None:
            return self._table[g]
        out = self._eye()
        if isinstance(grp, ZPow):
            for i, n in enumerate(g):
                if self.exact:
                    out = _m_mul(out, _m_pow(self.images[i], n, self.d))
                else:
                    out = out @ np.linalg.matrix_power(self.images[i], n)
            return out
        for s in g:  # reduced word in a free group
            m = self.images[abs(s) - 1]
            out = self._mul(out, m if s > 0 else self._T(m))
        return out

    def dense(self, g) -> np.ndarray:
        m = self.matrix(g)
        return np.array([[float(c) for c in row] for row in m]) if self.exact else m

    def apply(self, g, v: VectorH) -> VectorH:
        for k in v.entries:
            if not isinstance(k, int) or not 0 <= k < self.d:
                raise DimensionMismatch(f"label {k!r} outside 0..{self.d - 1}")
        m = self.matrix(g)
        if self.exact and v.exact:
            out = {}
            for i in range(self.d):
                s = Fraction(0)
                for j, c in v.entries.items():
                    if m[i][j]:
                        s = m[i][j] * c + s
                out[i] = s
            return VectorH(out, True)
        arr = v.to_array(range(self.d))
        return VectorH.from_array(self.dense(g) @ arr)

    def __repr__(self):
        return f"MatrixRep({self.group}, d={self.d}, exact={self.exact})"


class ZRotationAlg(RepSpec):
    """The realified rotation n -> z^n on R^2 for a unit algebraic z.

    Float vectors are rotated by the 2x2 matrix. Exact vectors hold two
    coordinates in Q(z) and represent the complex number c0 + c1*i; the
    action multiplies both by z^n, which closes exactly for roots of unity.
    """

    def __init__(self, z: UnitAlgebraic):
        self.group = ZPow(1)
        self.z = z
        self.exact = z.is_algebraic

    def labels(self) -> list:
        return [0, 1]

    def dense(self, g) -> np.ndarray:
        (n,) = self.group.coerce(g)
        zn = self.z.numeric() ** n
        return np.array([[zn.real, -zn.imag], [zn.imag, zn.real]])

    def apply(self, g, v: VectorH) -> VectorH:
        for k in v.entries:
            if k not in (0, 1):
                raise DimensionMismatch(f"label {k!r} outside 0..1")
        (n,) = self.group.coerce(g)
        if not v.exact:
            return VectorH.from_array(self.dense(g) @ v.to_array([0, 1]))
        zn = self.z.field_gen() ** n
        return VectorH({k: zn * c for k, c in v.entries.items()}, True)

    def realify_coords(self, v: VectorH) -> np.ndarray:
        """Real coordinates of the complex number c0 + c1*i encoded by an exact vector."""
        root = self.z.numeric()
        c = [v[k].evaluate(root) if isinstance(v[k], NumberFieldElem) else complex(float(v[k])) for k in (0, 1)]
        val = c[0] + 1j * c[1]
        return np.array([val.real, val.imag])


class DirectSum(RepSpec):
    """Block-diagonal sum of representations of one group."""

    def __init__(self, parts: Sequence[RepSpec]):
        if not parts:
            raise ValueError("empty direct sum")
        self.group = parts[0].group
        for p in parts[1:]:
            if p.group != self.group:
                raise DimensionMismatch("direct summands must represent the same group")
        self.parts = tuple(parts)
        self.exact = all(p.exact for p in parts)
        self._offsets = []
        off = 0
        for p in parts:
            self._offsets.append(off)
            off += p.dim
        self.d = off

    def labels(self) -> list:
        return list(range(self.d))

    def apply(self, g, v: VectorH) -> VectorH:
        out = VectorH({}, v.exact)
        for p, off in zip(self.parts, self._offsets):
            lab = p.labels()
            sub = {lab[k - off]: c for k, c in v.entries.items() if off <= k < off + len(lab)}
            img = p.apply(g, VectorH(sub, v.exact))
            back = {lab.index(k) + off: c for k, c in img.entries.items()}
            out = out + VectorH(back, v.exact)
        for k in v.entries:
            if not isinstance(k, int) or not 0 <= k < self.d:
                raise DimensionMismatch(f"label {k!r} outside 0..{self.d - 1}")
        return out


def trivial_rep(group: GroupSpec, d: int = 1) -> MatrixRep:
    eye = [[int(i == j) for j in range(d)] for i in range(d)]
    return MatrixRep(group, [eye] * len(group.primary_generators()))


# ---------------------------------------------------------------------------
# realification


def _split_complex(c) -> tuple:
    if isinstance(c, tuple):
        return c
    if isinstance(c, _RationalABC):
        return (Fraction(c), Fraction(0))
    c = complex(c)
    return (c.real, c.imag)


def realify_matrix(m: Sequence[Sequence]) -> list[list]:
    """Each entry a+bi becomes the block [[a, -b], [b, a]]."""
    d = len(m)
    out = [[0] * (2 * d) for _ in range(2 * d)]
    for i in range(d):
        for j in range(d):
            a, b = _split_complex(m[i][j])
            out[2 * i][2 * j], out[2 * i][2 * j + 1] = a, -b
            out[2 * i + 1][2 * j], out[2 * i + 1][2 * j + 1] = b, a
    return out


def realify(group: GroupSpec, images: Sequence, tol: float = ORTHO_TOL) -> MatrixRep:
    """Realification of a unitary representation given by complex generator images.

    Entries may be Python complex numbers or exact ``(re, im)`` pairs of
    rationals; the exact form yields an exact orthogonal representation.
    """
    real_images = []
    for m in images:
        exact = all(isinstance(c, tuple) or isinstance(c, _RationalABC) for row in m for c in row)
        if exact:
            d = len(m)
            split = [[_split_complex(c) for c in row] for row in m]
            # U* U = I, checked over Q[i]
            for i in range(d):
                for j in range(d):
                    re = sum((split[k][i][0] * split[k][j][0] + split[k][i][1] * split[k][j][1] for k in range(d)), Fraction(0))
                    im = sum((split[k][i][0] * split[k][j][1] - split[k][i][1] * split[k][j][0] for k in range(d)), Fraction(0))
                    if re != (i == j) or im != 0:
                        raise NotUnitary("generator image is not unitary")
        else:
            u = np.array([[complex(*c) if isinstance(c, tuple) else complex(c) for c in row] for row in m])
            if np.linalg.norm(u.conj().T @ u - np.eye(len(u))) > tol:
                raise NotUnitary("generator image is not unitary")
        real_images.append(realify_matrix(m))
    return MatrixRep(group, real_images, tol=tol)


def realify_vector(coords: Sequence) -> VectorH:
    """Complex coordinate j goes to real coordinates 2j (real part) and 2j+1 (imaginary part)."""
    out = {}
    for j, c in enumerate(coords):
        a, b = _split_complex(c)
        out[2 * j], out[2 * j + 1] = a, b
    return VectorH(out)


# ---------------------------------------------------------------------------
# invariance defect


@dataclass(frozen=True)
class DefectReport:
    norm: object
    defects: dict = field(default_factory=dict)
    max_defect: object = 0.0

    @property
    def max_float(self) -> float:
        return float(self.max_defect)


def _defect_value(d2, exact: bool):
    if exact and isinstance(d2, Fraction):
        r = fraction_sqrt(d2)
        if r is not None:
            return r
    return math.sqrt(float(d2))


def invariance_defect(rep: RepSpec, mu: GenMeasure, v: VectorH) -> DefectReport:
    """Per-element defects ||hv - v|| over the non-identity support of mu."""
    if v.is_zero():
        raise ZeroVector("defect of the zero vector is undefined")
    e = rep.group.identity()
    defects = {}
    for h in mu.elements():
        if h == e:
            continue
        diff = rep.apply(h, v) - v
        if isinstance(rep, ZRotationAlg) and v.exact:
            d2 = float(np.sum(rep.realify_coords(diff) ** 2))
        else:
            d2 = diff.norm2()
        defects[h] = _defect_value(d2, v.exact)
    nv = v.norm() if not (isinstance(rep, ZRotationAlg) and v.exact) else float(np.linalg.norm(rep.realify_coords(v)))
    top = max(defects.values(), key=float) if defects else 0.0
    return DefectReport(nv, defects, top)


# ---------------------------------------------------------------------------
# file formats


def parse_vector(text: str, group: GroupSpec | None = None, exact: bool = True) -> VectorH:
    """Lines ``label<TAB>coefficient``; labels are words when ``group`` is given."""
    entries = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        label, coeff = line.rsplit(None, 1) if "\t" not in line else line.split("\t", 1)
        key = group.parse(label.strip()) if group is not None else int(label)
        c = parse_rational(coeff.strip()) if exact else float(coeff)
        entries.append((key, c))
    out = {}
    for k, c in entries:
        out[k] = out.get(k, 0) + c
    return VectorH(out, exact)


def format_vector(v: VectorH, group: GroupSpec | None = None) -> str:
    lines = []
    for k, c in v.entries.items():
        label = group.format(k) if group is not None else str(k)
        lines.append(f"{label}\t{c}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_matrix_rep(text: str, group: GroupSpec, exact: bool | None = None) -> MatrixRep:
    """``gen <name>`` headers, each followed by d rows of d entries."""
    blocks: dict[str, list] = {}
    current = None
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("gen"):
            current = line.split(None, 1)[1].strip()
            blocks[current] = []
        elif current is None:
            raise ValueError("matrix rows before any 'gen' header")
        else:
            blocks[current].append(line.split())
    prim = group.primary_generators()
    images = []
    for i in range(len(prim)):
        name = gen_name(i + 1)
        if name not in blocks:
            raise UnknownGenerator(f"no image for generator {name}")
        rows = blocks.pop(name)
        if exact is False:
            images.append([[float(parse_rational(c)) for c in r] for r in rows])
        else:
            try:
                images.append([[parse_rational(c) for c in r] for r in rows])
            except (ValueError, ZeroDivisionError):
                images.append([[float(c) for c in r] for r in rows])
    if blocks:
        raise UnknownGenerator(f"unknown generators {sorted(blocks)}")
    return MatrixRep(group, images, exact=exact)


def apply_g(rep: RepSpec, g, v: VectorH) -> VectorH:
    return rep.apply(g, v)


__all__ = [
    "VectorH",
    "RepSpec",
    "Regular",
    "MatrixRep",
    "ZRotationAlg",
    "DirectSum",
    "DefectReport",
    "apply_g",
    "inner",
    "sigma_eval",
    "invariance_defect",
    "realify",
    "realify_matrix",
    "realify_vector",
    "trivial_rep",
    "parse_vector",
    "format_vector",
    "parse_matrix_rep",
]
