"""Finitely generated groups, symmetric generating measures and Cayley balls.

Three models are supported:

* :class:`FreeGroup` -- elements are reduced words, tuples of nonzero ints
  where ``i`` stands for the i-th generator and ``-i`` for its inverse;
* :class:`ZPow` -- elements of Z^d are integer tuples;
* :class:`PermGroup` -- elements are permutations of ``range(n)`` stored as
  image tuples, composed right to left.

Words in text use single-letter generator names ``a, b, c, ...``; a trailing
apostrophe marks an inverse (``"a b' a"``) and ``e`` is the identity.
"""

from __future__ import annotations

import re
import string
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .errors import (
    BallTooLarge,
    MissingIdentity,
    NotGenerating,
    NotProbability,
    NotSymmetric,
    UnknownGenerator,
)

BALL_CAP = 2_000_000

GroupElem = Hashable

_LETTERS = string.ascii_lowercase.replace("e", "")


def gen_name(i: int) -> str:
    """Name of the i-th generator (1-based); ``e`` is reserved for the identity."""
    return _LETTERS[i - 1]


def parse_word(text: str, rank: int | None = None) -> tuple[int, ...]:
    """Parse ``"a b' a"`` into signed generator indices, unreduced."""
    out = []
    compact = text.replace(" ", "")
    if not re.fullmatch(r"(?:[a-z](?:'|\^-1)?)*", compact):
        raise UnknownGenerator(f"cannot read {text!r} as a word in a, b, ... (inverse a')")
    for tok in re.findall(r"[a-z](?:'|\^-1)?", compact):
        if tok == "e":
            continue
        idx = _LETTERS.index(tok[0]) + 1
        if rank is not None and idx > rank:
            raise UnknownGenerator(f"generator {tok[0]!r} not among the first {rank}")
        out.append(-idx if len(tok) > 1 else idx)
    return tuple(out)


def format_word(word: Sequence[int]) -> str:
    if not word:
        return "e"
    return " ".join(gen_name(abs(s)) + ("'" if s < 0 else "") for s in word)


class GroupSpec:
    """Common interface of the group models."""

    is_finite = False

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def generators(self) -> list:
        """Standard symmetric generating set, identity excluded, fixed order."""
        raise NotImplementedError

    def word_length(self, g) -> int:
        raise NotImplementedError

    def sort_key(self, g):
        return g

    def from_word(self, word: Sequence[int]):
        """Evaluate a word in the standard generators."""
        gens = self.primary_generators()
        out = self.identity()
        for s in word:
            if abs(s) > len(gens):
                raise UnknownGenerator(f"generator index {abs(s)} out of range")
            g = gens[abs(s) - 1]
            out = self.mul(out, g if s > 0 else self.inv(g))
        return out

    def primary_generators(self) -> list:
        """One generator per name a, b, c, ... (no inverses)."""
        raise NotImplementedError

    def parse(self, text: str):
        text = text.strip()
        return self.from_word(parse_word(text, len(self.primary_generators())))

    def format(self, g) -> str:
        raise NotImplementedError

    def coerce(self, g):
        """Accept canonical elements, word strings, or ints for Z."""
        if isinstance(g, str):
            return self.parse(g)
        return g


@dataclass(frozen=True)
class FreeGroup(GroupSpec):
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("free group rank must be >= 1")

    def identity(self):
        return ()

    def mul(self, a, b):
        a, b = list(a), list(b)
        while a and b and a[-1] == -b[0]:
            a.pop()
            b.pop(0)
        return tuple(a + b)

    def inv(self, a):
        return tuple(-s for s in reversed(a))

    def primary_generators(self):
        return [(i,) for i in range(1, self.rank + 1)]

    def generators(self):
        out = []
        for i in range(1, self.rank + 1):
            out += [(i,), (-i,)]
        return out

    def word_length(self, g) -> int:
        return len(g)

    def sort_key(self, g):
        return tuple(2 * (abs(s) - 1) + (s < 0) for s in g)

    def from_word(self, word):
        out = ()
        for s in word:
            if abs(s) > self.rank:
                raise UnknownGenerator(f"generator index {abs(s)} out of range")
            out = self.mul(out, (s,))
        return out

    def format(self, g) -> str:
        return format_word(g)

    def coerce(self, g):
        if isinstance(g, str):
            return self.parse(g)
        if isinstance(g, int):
            return self.from_word((1,) * g if g >= 0 else (-1,) * (-g))
        return self.from_word(g)

    def __str__(self):
        return f"free:{self.rank}"


@dataclass(frozen=True)
class ZPow(GroupSpec):
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("Z^d needs d >= 1")

    def identity(self):
        return (0,) * self.dim

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def primary_generators(self):
        return [tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim)]

    def generators(self):
        out = []
        for g in self.primary_generators():
            out += [g, self.inv(g)]
        return out

    def word_length(self, g) -> int:
        return sum(abs(x) for x in g)

    def format(self, g) -> str:
        word = []
        for i, n in enumerate(g):
            word += [i + 1 if n > 0 else -(i + 1)] * abs(n)
        return format_word(word)

    def coerce(self, g):
        if isinstance(g, str):
            return self.parse(g)
        if isinstance(g, int):
            if self.dim != 1:
                raise UnknownGenerator("integer elements only make sense for Z")
            return (g,)
        g = tuple(int(x) for x in g)
        if len(g) != self.dim:
            raise UnknownGenerator(f"expected a {self.dim}-vector, got {g}")
        return g

    def __str__(self):
        return f"z:{self.dim}"


def parse_cycles(text: str, n: int) -> tuple[int, ...]:
    """``"(0 1 2)(3 4)"`` -> image tuple on range(n)."""
    perm = list(range(n))
    for cyc in re.findall(r"\(([^)]*)\)", text):
        pts = [int(t) for t in re.split(r"[\s,]+", cyc.strip()) if t]
        for i, p in enumerate(pts):
            if not 0 <= p < n:
                raise ValueError(f"point {p} outside range({n})")
            perm[p] = pts[(i + 1) % len(pts)]
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{text!r} is not a permutation")
    return tuple(perm)


def format_cycles(perm: Sequence[int]) -> str:
    seen, out = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, i = [], start
        while i not in seen:
            seen.add(i)
            cyc.append(i)
            i = perm[i]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


@dataclass(frozen=True)
class PermGroup(GroupSpec):
    degree: int
    gens: tuple[tuple[int, ...], ...]
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    is_finite = True

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(tuple(int(i) for i in g) for g in self.gens))
        for g in self.gens:
            if sorted(g) != list(range(self.degree)):
                raise ValueError(f"{g} is not a permutation of range({self.degree})")

    @classmethod
    def from_cycles(cls, degree: int, gens: Iterable[str]) -> "PermGroup":
        return cls(degree, tuple(parse_cycles(g, degree) for g in gens))

    def identity(self):
        return tuple(range(self.degree))

    def mul(self, a, b):
        return tuple(a[i] for i in b)

    def inv(self, a):
        out = [0] * len(a)
        for i, x in enumerate(a):
            out[x] = i
        return tuple(out)

    def primary_generators(self):
        return list(self.gens)

    def generators(self):
        out, seen = [], {self.identity()}
        for g in self.gens:
            for h in (g, self.inv(g)):
                if h not in seen:
                    seen.add(h)
                    out.append(h)
        return out

    def distances(self) -> dict:
        """Word length of every element (BFS from the identity)."""
        if "dist" not in self._cache:
            dist = {self.identity(): 0}
            queue = deque([self.identity()])
            gens = self.generators()
            while queue:
                x = queue.popleft()
                for s in gens:
                    y = self.mul(x, s)
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        queue.append(y)
            self._cache["dist"] = dist
        return self._cache["dist"]

    def elements(self) -> list:
        return sorted(self.distances(), key=lambda g: (self.distances()[g], g))

    def order(self) -> int:
        return len(self.distances())

    def word_length(self, g) -> int:
        return self.distances()[g]

    def format(self, g) -> str:
        return format_cycles(g)

    def coerce(self, g):
        if isinstance(g, str):
            if g.strip().startswith("("):
                return parse_cycles(g, self.degree)
            return self.parse(g)
        return tuple(g)

    def __str__(self):
        return f"perm:{self.degree}:" + ";".join(format_cycles(g) for g in self.gens)


def parse_group(text: str) -> GroupSpec:
    """``free:2`` | ``z:2`` | ``perm:n:(0 1 2);(0 1)``; a leading ``group =`` is ignored."""
    text = text.strip()
    if text.startswith("group"):
        text = text.split("=", 1)[1].strip()
    kind, _, rest = text.partition(":")
    if kind == "free":
        return FreeGroup(int(rest))
    if kind == "z":
        return ZPow(int(rest))
    if kind == "perm":
        n, _, gens = rest.partition(":")
        return PermGroup.from_cycles(int(n), [g for g in gens.split(";") if g.strip()])
    raise ValueError(f"unrecognised group spec {text!r}")


def cayley_ball(group: GroupSpec, gens: Sequence | None = None, r: int = 0, cap: int = BALL_CAP) -> list:
    """Elements of word length <= r, by length and then by canonical form.

    Index 0 is the identity. ``gens`` must be closed under inverses; it
    defaults to the standard generators.
    """
    if r < 0:
        raise ValueError("radius must be nonnegative")
    gens = list(group.generators() if gens is None else gens)
    gen_set = set(gens)
    if any(group.inv(s) not in gen_set for s in gens):
        raise ValueError("generating set is not closed under inverses")
    e = group.identity()
    ball, seen, sphere = [e], {e}, [e]
    for _ in range(r):
        nxt = set()
        for x in sphere:
            for s in gens:
                y = group.mul(x, s)
                if y not in seen:
                    nxt.add(y)
        if not nxt:
            break
        if len(ball) + len(nxt) > cap:
            raise BallTooLarge(f"ball exceeds cap {cap}")
        sphere = sorted(nxt, key=group.sort_key)
        seen.update(sphere)
        ball.extend(sphere)
    return ball


def free_ball_size(rank: int, r: int) -> int:
    """Closed form |B_r| for the free group of the given rank."""
    if rank == 1:
        return 2 * r + 1
    k2 = 2 * rank
    return k2 * ((k2 - 1) ** r - 1) // (k2 - 2) + 1


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True)
class GenMeasure:
    """Finitely supported measure with exact rational weights."""

    support: tuple[tuple[GroupElem, Fraction], ...]

    def __init__(self, support: Iterable[tuple[GroupElem, object]]):
        merged: dict = {}
        for g, w in support:
            merged[g] = merged.get(g, Fraction(0)) + Fraction(w)
        object.__setattr__(self, "support", tuple(merged.items()))

    def weight(self, g) -> Fraction:
        for h, w in self.support:
            if h == g:
                return w
        return Fraction(0)

    def elements(self) -> list:
        return [g for g, _ in self.support]

    def items(self):
        return list(self.support)

    def min_weight(self) -> Fraction:
        return min(w for _, w in self.support)


def lazy_uniform(group: GroupSpec) -> GenMeasure:
    """Uniform weight on the identity and the standard generators."""
    pts = [group.identity()] + group.generators()
    w = Fraction(1, len(pts))
    return GenMeasure((g, w) for g in pts)


def parse_measure(text: str, group: GroupSpec) -> GenMeasure:
    """Lines ``elem weight``; elements are words, ``e`` is the identity."""
    items = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line or line.startswith("group"):
            continue
        word, _, weight = line.rpartition(" ")
        items.append((group.coerce(word.strip() or "e"), Fraction(weight)))
    return GenMeasure(items)


def validate_measure(group: GroupSpec, mu: GenMeasure) -> GenMeasure:
    """Check that ``mu`` is a symmetric generating measure for ``group``."""
    if any(w <= 0 for _, w in mu.support) or sum(w for _, w in mu.support) != 1:
        raise NotProbability("weights must be positive and sum to 1")
    e = group.identity()
    if mu.weight(e) == 0:
        raise MissingIdentity("support must contain the identity")
    for g, w in mu.support:
        if mu.weight(group.inv(g)) != w:
            raise NotSymmetric(f"mu({group.format(g)}) != mu of its inverse")
    nonid = {g for g in mu.elements() if g != e}
    if group.is_finite:
        elems = set(group.distances())
        if not nonid <= elems:
            raise NotGenerating("support leaves the group")
        # closure of the support
        reached = {e}
        queue = deque([e])
        while queue:
            x = queue.popleft()
            for s in nonid:
                y = group.mul(x, s)
                if y not in reached:
                    reached.add(y)
                    queue.append(y)
        if len(reached) != len(elems):
            raise NotGenerating(f"support generates a subgroup of order {len(reached)} < {len(elems)}")
    elif nonid != set(group.generators()):
        raise NotGenerating("support must be the standard symmetric generators plus the identity")
    return mu
