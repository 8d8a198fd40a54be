"""Spectral gaps, almost invariant vectors and additive conjugacy, computed at desk scale."""

from .errors import BohrgapError
from .exactalg import IntPoly, NumberFieldElem, TorusValue, cyclotomic_factor, nf_inverse, poly_is_irreducible, poly_normalize
from .groups import FreeGroup, GenMeasure, PermGroup, ZPow, cayley_ball, lazy_uniform, parse_group, validate_measure
from .reps import DirectSum, MatrixRep, Regular, VectorH, ZRotationAlg, apply_g, inner, invariance_defect, realify, sigma_eval
from .markov import (
    apply_D,
    apply_P,
    gap_bound_audit,
    invariant_subspace,
    kesten_verdict,
    solve_D,
    spectral_radius_truncated,
)
from .almostinv import AlmostInvSeq, orthogonalize, scale_and_witness, sparsify_weak_null
from .duality import AutoAction, FiniteAbelian, dual_conjugacy_transport, enumerate_dual, fixed_counts, toral_ergodicity
from .zconj import UnitAlgebraic, build_xi, decide_conjugacy, eval_at

__version__ = "0.1.0"
