import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bohrgap.errors import (
    BallTooLarge,
    MissingIdentity,
    NotGenerating,
    NotProbability,
    NotSymmetric,
    UnknownGenerator,
)
from bohrgap.groups import (
    FreeGroup,
    GenMeasure,
    PermGroup,
    ZPow,
    cayley_ball,
    free_ball_size,
    lazy_uniform,
    parse_group,
    parse_measure,
    parse_word,
    validate_measure,
)


def test_ball_examples():
    assert len(cayley_ball(FreeGroup(2), r=2)) == 17
    assert len(cayley_ball(ZPow(2), r=1)) == 5
    for g in (FreeGroup(3), ZPow(2), PermGroup.from_cycles(4, ["(0 1 2 3)", "(0 1)"])):
        assert cayley_ball(g, r=0) == [g.identity()]


@pytest.mark.parametrize("k", [2, 3])
@pytest.mark.parametrize("r", range(0, 6))
def test_free_ball_closed_form(k, r):
    assert len(cayley_ball(FreeGroup(k), r=r)) == free_ball_size(k, r) == 2 * k * ((2 * k - 1) ** r - 1) // (2 * k - 2) + 1


def test_ball_prefix_and_order():
    g = FreeGroup(2)
    small, big = cayley_ball(g, r=3), cayley_ball(g, r=4)
    assert big[: len(small)] == small
    lengths = [g.word_length(x) for x in big]
    assert lengths == sorted(lengths)
    assert cayley_ball(g, r=4) == big  # deterministic


def test_ball_inverse_closed():
    for g in (FreeGroup(2), ZPow(3)):
        ball = set(cayley_ball(g, r=3))
        assert all(g.inv(x) in ball for x in ball)


def test_ball_cap():
    with pytest.raises(BallTooLarge):
        cayley_ball(FreeGroup(2), r=10, cap=1000)


def test_words_and_groups():
    g = FreeGroup(2)
    assert parse_word("a b' a") == (1, -2, 1)
    assert g.parse("a a'") == g.identity()
    assert g.format(g.parse("a b' a")) == "a b' a"
    assert isinstance(parse_group("group = free:2"), FreeGroup)
    assert parse_group("z:2") == ZPow(2)
    s3 = parse_group("perm:3:(0 1 2);(0 1)")
    assert s3.order() == 6


def _random_elem(g, rng, n=6):
    gens = g.generators()
    x = g.identity()
    for _ in range(rng.randint(0, n)):
        x = g.mul(x, rng.choice(gens))
    return x


@pytest.mark.parametrize("g", [FreeGroup(2), ZPow(2), PermGroup.from_cycles(5, ["(0 1 2 3 4)", "(0 1)"])])
def test_associativity_and_inverses(g):
    rng = random.Random(0)
    for _ in range(10_000 // 3):
        a, b, c = (_random_elem(g, rng) for _ in range(3))
        assert g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c))
        assert g.mul(a, g.inv(a)) == g.identity()


@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=12))
def test_free_reduced(word):
    g = FreeGroup(2)
    x = g.from_word(word)
    assert all(x[i] != -x[i + 1] for i in range(len(x) - 1))
    assert g.mul(x, g.inv(x)) == ()


def test_measure_examples():
    g = FreeGroup(2)
    mu = lazy_uniform(g)
    assert validate_measure(g, mu) is mu
    assert all(w == Fraction(1, 5) for _, w in mu.items())
    with pytest.raises(MissingIdentity):
        validate_measure(g, parse_measure("a 1/4\na' 1/4\nb 1/4\nb' 1/4", g))
    with pytest.raises(NotSymmetric):
        validate_measure(g, parse_measure("a 1/2\na' 1/4\ne 1/4", g))
    with pytest.raises(NotProbability):
        validate_measure(g, parse_measure("e 1/2\na 1/4\na' 1/4\nb 1/4\nb' 1/4", g))


def test_measure_generation():
    g = FreeGroup(2)
    with pytest.raises(NotGenerating):
        validate_measure(g, parse_measure("e 1/3\na 1/3\na' 1/3", g))
    s3 = PermGroup.from_cycles(3, ["(0 1 2)", "(0 1)"])
    rot_only = GenMeasure([(s3.identity(), Fraction(1, 3)), (s3.gens[0], Fraction(1, 3)),
                           (s3.inv(s3.gens[0]), Fraction(1, 3))])
    with pytest.raises(NotGenerating):
        validate_measure(s3, rot_only)
    validate_measure(s3, lazy_uniform(s3))


@pytest.mark.parametrize("bad", ["A", "a*b", "a''", "1"])
def test_parse_word_rejects_junk(bad):
    with pytest.raises(UnknownGenerator):
        parse_word(bad)
