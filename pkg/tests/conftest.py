from fractions import Fraction

import numpy as np
import pytest

from bohrgap.groups import GenMeasure, PermGroup, ZPow, lazy_uniform
from bohrgap.reps import MatrixRep


@pytest.fixture
def z1():
    return ZPow(1)


@pytest.fixture
def mu_third(z1):
    """1/3 on {-1, 0, +1}."""
    return GenMeasure([((0,), Fraction(1, 3)), ((1,), Fraction(1, 3)), ((-1,), Fraction(1, 3))])


@pytest.fixture
def c2():
    return PermGroup(2, [(1, 0)])


@pytest.fixture
def sign_rep(c2):
    return MatrixRep(c2, [[[-1]]])


@pytest.fixture
def mu_half(c2):
    return lazy_uniform(c2)


@pytest.fixture
def rot90(z1):
    return MatrixRep(z1, [[[0, -1], [1, 0]]])


def random_orthogonal(rng: np.random.Generator, d: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))
