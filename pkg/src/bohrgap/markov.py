"""The averaging operator P_mu = sum_h mu(h) pi_h and its spectral diagnostics.

Truncations of the regular representation are handled matrix-free: a
Cayley ball is enumerated once, every support element becomes an index
array, and P_mu is applied as a weighted gather.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import BallTooLarge, HasInvariantVector, NotConverged, SingularOperator
from .groups import BALL_CAP, FreeGroup, GenMeasure, GroupSpec, PermGroup, cayley_ball
from .reps import Regular, RepSpec, VectorH

MAX_ITER = 100_000
PLATEAU_TOL = 1e-6
NOGAP_LEVEL = 1 - 1e-3
SINGULAR_TOL = 1e-8

GAP, NOGAP, INCONCLUSIVE = "Gap", "NoGap", "Inconclusive"


def apply_P(rep: RepSpec, mu: GenMeasure, v: VectorH) -> VectorH:
    """sum_h mu(h) pi_h v."""
    out = VectorH({}, v.exact)
    for h, w in mu.items():
        out = out + rep.apply(h, v) * (w if v.exact else float(w))
    return out


def apply_D(rep: RepSpec, mu: GenMeasure, v: VectorH) -> VectorH:
    return v - apply_P(rep, mu, v)


def dense_P(rep: RepSpec, mu: GenMeasure) -> np.ndarray:
    """P_mu as a float matrix in the basis ``rep.labels()``."""
    return sum(float(w) * rep.dense(h) for h, w in mu.items())


# ---------------------------------------------------------------------------
# truncated regular operator


@dataclass
class BallOperator:
    """Dirichlet truncation of P_mu to a Cayley ball, applied matrix-free."""

    ball: list
    weights: np.ndarray
    gather: np.ndarray  # shape (len(support), n); value n marks "outside the ball"

    @property
    def size(self) -> int:
        return len(self.ball)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        ext = np.append(x, 0.0)
        return self.weights @ ext[self.gather]


def ball_operator(group: GroupSpec, mu: GenMeasure, r: int, cap: int = BALL_CAP) -> BallOperator:
    ball = cayley_ball(group, r=r, cap=cap)
    index = {g: i for i, g in enumerate(ball)}
    n = len(ball)
    rows, weights = [], []
    for h, w in mu.items():
        # (pi_h v)(x) = v(h^-1 x)
        hinv = group.inv(h)
        rows.append([index.get(group.mul(hinv, x), n) for x in ball])
        weights.append(float(w))
    return BallOperator(ball, np.array(weights), np.array(rows, dtype=np.int64))


def _power_iteration(matvec: Callable, x0: np.ndarray, tol: float, max_iter: int, shift: float = 0.0):
    x = x0 / np.linalg.norm(x0)
    prev = None
    for it in range(max_iter):
        y = matvec(x)
        lam = float(x @ y)
        if prev is not None and abs(lam - prev) < tol:
            return lam, it
        prev = lam
        z = y + shift * x
        nz = np.linalg.norm(z)
        if nz == 0.0:
            return lam, it
        x = z / nz
    raise NotConverged(f"power iteration did not settle within {max_iter} steps")


def radial_free_estimate(rank: int, mu_e, mu_gen, r: int) -> float:
    """Top eigenvalue of the truncated operator on a free group, via its radial part.

    For the uniform generator weights the Perron vector of the ball
    truncation is constant on spheres (it is unique and the tree's
    automorphisms fixing the identity act transitively on each sphere),
    so the problem reduces to a tridiagonal matrix of size r + 1.
    """
    if r == 0:
        return float(mu_e)
    k = rank
    diag = np.full(r + 1, float(mu_e))
    off = np.full(r, float(mu_gen) * math.sqrt(2 * k - 1))
    off[0] = float(mu_gen) * math.sqrt(2 * k)
    vals = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(r, r))
    return float(vals[0])


def _uniform_free(group: GroupSpec, mu: GenMeasure):
    if not isinstance(group, FreeGroup):
        return None
    gens = group.generators()
    ws = {mu.weight(g) for g in gens}
    if len(ws) != 1 or set(mu.elements()) != set(gens) | {group.identity()}:
        return None
    return mu.weight(group.identity()), ws.pop()


def spectral_radius_truncated(rep: RepSpec, mu: GenMeasure, r: int | None = None, tol: float = 1e-12,
                              max_iter: int = MAX_ITER, method: str = "power", cap: int = BALL_CAP,
                              seed: int = 0) -> float:
    """Top eigenvalue of the (truncated) self-adjoint operator P_mu.

    Regular representations are truncated to the ball of radius ``r`` and
    iterated from delta_identity. Finite-dimensional matrix
    representations ignore ``r``; they start from the first basis vector
    plus a small seeded perturbation, and the iteration runs on
    P + c I with c = max(0, 1 - 2 mu(e)) so that the top algebraic
    eigenvalue dominates. ``method="radial"`` uses the exact radial
    reduction for free groups with uniform generator weights.
    """
    if isinstance(rep, Regular):
        radius = rep.radius if r is None else r
        if radius is None:
            if not rep.group.is_finite:
                raise BallTooLarge("an infinite group needs a truncation radius")
            radius = max(rep.group.distances().values())
        if method == "radial":
            weights = _uniform_free(rep.group, mu)
            if weights is None:
                raise ValueError("radial method needs a free group with uniform generator weights")
            return radial_free_estimate(rep.group.rank, weights[0], weights[1], radius)
        op = ball_operator(rep.group, mu, radius, cap=cap)
        x0 = np.zeros(op.size)
        x0[0] = 1.0
        lam, _ = _power_iteration(op, x0, tol, max_iter)
        return lam
    labels = rep.labels()
    P = dense_P(rep, mu)
    rng = np.random.default_rng(seed)
    x0 = np.zeros(len(labels))
    x0[0] = 1.0
    x0 += 1e-3 * rng.standard_normal(len(labels))
    shift = max(0.0, 1.0 - 2.0 * float(mu.weight(rep.group.identity())))
    lam, _ = _power_iteration(lambda x: P @ x, x0, tol, max_iter, shift=shift)
    return lam


@dataclass
class SpectralReport:
    radii: list
    estimates: list
    verdict: str
    margin: float
    method: str = "power"
    notes: dict = field(default_factory=dict)

    def to_jsonl(self) -> str:
        lines = [json.dumps({"radius": r, "estimate": x}) for r, x in zip(self.radii, self.estimates)]
        lines.append(json.dumps({"verdict": self.verdict, "margin": self.margin}))
        return "\n".join(lines) + "\n"


def kesten_verdict(group: GroupSpec, mu: GenMeasure, radii: Sequence[int], theta: float = 0.95,
                   tol: float = 1e-12, method: str = "power", cap: int = BALL_CAP) -> SpectralReport:
    """Semi-decision for a spectral gap of the mu-random walk on l^2(G).

    Gap when the last two estimates differ by less than 1e-6 at a value at
    most ``theta``; NoGap when any estimate reaches 1 - 1e-3; otherwise
    Inconclusive. Truncation can never prove ||P_mu|| = 1, so NoGap is a
    numerical verdict. Finite permutation groups get an exact dense
    eigensolve instead.
    """
    if isinstance(group, PermGroup):
        rep = Regular(group)
        vals = np.sort(np.linalg.eigvalsh(dense_P(rep, mu)))[::-1]
        second = float(vals[1]) if len(vals) > 1 else -1.0
        verdict = GAP if second < 1 - SINGULAR_TOL else NOGAP
        diam = max(group.distances().values())
        return SpectralReport([diam], [second], verdict, 1 - second, "dense")
    radii = list(radii)
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radius schedule must be strictly increasing")
    rep = Regular(group)
    estimates = [spectral_radius_truncated(rep, mu, r, tol=tol, method=method, cap=cap) for r in radii]
    last = estimates[-1]
    if any(x >= NOGAP_LEVEL for x in estimates):
        verdict = NOGAP
    elif len(estimates) >= 2 and abs(estimates[-1] - estimates[-2]) < PLATEAU_TOL and last <= theta:
        verdict = GAP
    else:
        verdict = INCONCLUSIVE
    return SpectralReport(radii, estimates, verdict, 1 - last, method)


# ---------------------------------------------------------------------------
# finite-dimensional tools


def _nonidentity(rep: RepSpec, mu: GenMeasure) -> list:
    e = rep.group.identity()
    return [h for h in mu.elements() if h != e]


def invariant_subspace(rep: RepSpec, mu: GenMeasure, threshold: float = SINGULAR_TOL) -> list[VectorH]:
    """Orthonormal basis of ker(D_mu), which is the space of G-invariant vectors."""
    labels = rep.labels()
    D = np.eye(len(labels)) - dense_P(rep, mu)
    _, s, vt = np.linalg.svd(D)
    return [VectorH.from_array(vt[i], labels) for i in range(len(s)) if s[i] < threshold]


def _cg(matvec: Callable, b: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    x = np.zeros_like(b)
    r = b.copy()
    p = r.copy()
    rr = r @ r
    target = (tol * np.linalg.norm(b)) ** 2
    for _ in range(max_iter):
        if rr <= target:
            return x
        Ap = matvec(p)
        curv = p @ Ap
        if curv <= 1e-14 * (p @ p):
            raise SingularOperator("D_mu is not positive definite along the search direction")
        alpha = rr / curv
        x += alpha * p
        r -= alpha * Ap
        rr_new = r @ r
        p = r + (rr_new / rr) * p
        rr = rr_new
    if rr <= target:
        return x
    raise SingularOperator("conjugate gradient did not reach the tolerance; D_mu is not invertible")


def solve_D(rep: RepSpec, mu: GenMeasure, b: VectorH, tol: float = 1e-10) -> VectorH:
    """Solve D_mu v = b by conjugate gradients on the self-adjoint D_mu."""
    labels = rep.labels()
    P = dense_P(rep, mu)
    bb = b.to_array(labels)
    if not bb.any():
        return VectorH({}, False)
    x = _cg(lambda y: y - P @ y, bb, tol, 20 * len(labels) + 100)
    if np.linalg.norm(x - P @ x - bb) > tol * np.linalg.norm(bb):
        raise SingularOperator("residual above tolerance")
    return VectorH.from_array(x, labels)


def top_eigenvalue(rep: RepSpec, mu: GenMeasure) -> float:
    """Largest eigenvalue of P_mu on the whole (finite-dimensional) space."""
    return float(np.linalg.eigvalsh(dense_P(rep, mu))[-1])


@dataclass(frozen=True)
class Dichotomy:
    has_invariant: bool
    solve_failed: bool
    spectral_one: bool

    @property
    def agree(self) -> bool:
        return self.has_invariant == self.solve_failed == self.spectral_one


def dichotomy(rep: RepSpec, mu: GenMeasure, seed: int = 0) -> Dichotomy:
    """Evaluate the three equivalent conditions on one representation."""
    inv = bool(invariant_subspace(rep, mu))
    rng = np.random.default_rng(seed)
    b = VectorH.from_array(rng.standard_normal(rep.dim), rep.labels())
    try:
        solve_D(rep, mu, b)
        failed = False
    except SingularOperator:
        failed = True
    spec = top_eigenvalue(rep, mu) >= 1 - SINGULAR_TOL
    return Dichotomy(inv, failed, spec)


# ---------------------------------------------------------------------------
# gap bound audit


@dataclass(frozen=True)
class GapAudit:
    epsilon: float
    epsilon_upper: float
    bound: float
    samples: int
    max_observed: float

    @property
    def passed(self) -> bool:
        return self.max_observed <= self.bound + 1e-9

    def to_json(self) -> str:
        return json.dumps({"epsilon": self.epsilon, "epsilon_upper": self.epsilon_upper, "bound": self.bound,
                           "samples": self.samples, "max_observed": self.max_observed, "passed": self.passed})


def _max_defect(diffs: Sequence[np.ndarray], v: np.ndarray) -> float:
    return max(float(np.linalg.norm(A @ v)) for A in diffs)


def _minmax_defect(diffs: Sequence[np.ndarray], starts: Sequence[np.ndarray], steps: int = 400) -> float:
    """Projected subgradient descent of max_h ||(I - pi_h) v|| on the unit sphere."""
    best = math.inf
    for v in starts:
        v = v / np.linalg.norm(v)
        lr = 0.1
        for _ in range(steps):
            vals = [float(np.linalg.norm(A @ v)) for A in diffs]
            i = int(np.argmax(vals))
            best = min(best, vals[i])
            if vals[i] == 0.0:
                return 0.0
            grad = diffs[i].T @ (diffs[i] @ v) / vals[i]
            grad -= (grad @ v) * v
            v = v - lr * grad
            v /= np.linalg.norm(v)
            lr *= 0.99
    return best


def gap_bound_audit(rep: RepSpec, mu: GenMeasure, samples: int = 10_000, seed: int = 0,
                    starts: int = 8) -> GapAudit:
    """Check ||P_mu v||^2 <= 1 - eps^2 mu(e) min_h mu(h) / 2 on random unit vectors.

    eps is a certified lower bound for min over unit v of max_h ||hv - v||:
    the max over h is at least the mean of the squares, whose minimum is the
    smallest eigenvalue of sum_h (I - pi_h)^T (I - pi_h) over the
    non-identity support. A projected subgradient search supplies an upper
    estimate for comparison.
    """
    if invariant_subspace(rep, mu):
        raise HasInvariantVector("the representation has nonzero invariant vectors; the bound is vacuous")
    d = rep.dim
    diffs = [np.eye(d) - rep.dense(h) for h in _nonidentity(rep, mu)]
    gram = sum(A.T @ A for A in diffs) / len(diffs)
    evals, evecs = np.linalg.eigh(gram)
    eps_lo = math.sqrt(max(float(evals[0]), 0.0))
    rng = np.random.default_rng(seed)
    start_vecs = [evecs[:, 0]] + [rng.standard_normal(d) for _ in range(starts - 1)]
    eps_hi = _minmax_defect(diffs, start_vecs)
    eps_hi = min(eps_hi, _max_defect(diffs, evecs[:, 0]))
    mu_e = float(mu.weight(rep.group.identity()))
    bound = 1 - 0.5 * eps_lo ** 2 * mu_e * float(mu.min_weight())
    P = dense_P(rep, mu)
    V = rng.standard_normal((samples, d))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    observed = float(np.max(np.sum((V @ P.T) ** 2, axis=1))) if samples else 0.0
    return GapAudit(eps_lo, eps_hi, bound, samples, observed)


def exact_bound(eps2: Fraction, mu: GenMeasure, identity) -> Fraction:
    """The bound 1 - eps^2 mu(e) min_h mu(h) / 2 in exact arithmetic."""
    return 1 - Fraction(1, 2) * eps2 * mu.weight(identity) * mu.min_weight()


__all__ = [
    "apply_P",
    "apply_D",
    "dense_P",
    "ball_operator",
    "BallOperator",
    "radial_free_estimate",
    "spectral_radius_truncated",
    "SpectralReport",
    "kesten_verdict",
    "invariant_subspace",
    "solve_D",
    "top_eigenvalue",
    "dichotomy",
    "Dichotomy",
    "GapAudit",
    "gap_bound_audit",
    "exact_bound",
    "GAP",
    "NOGAP",
    "INCONCLUSIVE",
]
