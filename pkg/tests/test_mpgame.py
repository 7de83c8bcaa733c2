from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropkit.core import BudgetExceeded, ShapeError
from tropkit.mpgame import MeanPayoffGame, combine_and, decide, mean_values, negate, value_bruteforce


def cycle(w: int) -> MeanPayoffGame:
    return MeanPayoffGame.of(1, 1, [(0, 1, w), (1, 0, w)])


CHOICE = MeanPayoffGame.of(1, 2, [(0, 1, 0), (0, 2, 0), (1, 0, 2), (2, 0, -2)])


def random_game(rng: random.Random, vmax=8, wmax=3) -> MeanPayoffGame:
    n1 = rng.randint(1, vmax - 1)
    n2 = rng.randint(1, vmax - n1)
    edges = set()
    for u in range(n1):
        for v in rng.sample(range(n1, n1 + n2), rng.randint(1, min(3, n2))):
            edges.add((u, v))
    for u in range(n1, n1 + n2):
        for v in rng.sample(range(n1), rng.randint(1, min(3, n1))):
            edges.add((u, v))
    return MeanPayoffGame.of(n1, n2, [(u, v, rng.randint(-wmax, wmax)) for u, v in sorted(edges)], rng.randrange(n1))


@st.composite
def games(draw):
    return random_game(random.Random(draw(st.integers(0, 2**32))), vmax=6)


class TestModel:
    def test_rejects_non_bipartite(self):
        with pytest.raises(ShapeError):
            MeanPayoffGame.of(2, 1, [(0, 1, 0), (1, 2, 0), (2, 0, 0)])

    def test_rejects_dead_end(self):
        with pytest.raises(ShapeError):
            MeanPayoffGame.of(1, 1, [(0, 1, 0)])

    def test_start_owned_by_player_one(self):
        with pytest.raises(ShapeError):
            MeanPayoffGame.of(1, 1, [(0, 1, 0), (1, 0, 0)], start=1)


class TestValues:
    def test_examples(self):
        assert value_bruteforce(cycle(1)) == 1
        assert value_bruteforce(cycle(-1)) == -1
        assert value_bruteforce(CHOICE) == 1

    def test_decide_examples(self):
        assert decide(cycle(1))
        assert not decide(cycle(-1))
        assert not decide(cycle(0))

    def test_fractional_value(self):
        # one four-edge cycle 0 -> 2 -> 1 -> 3 -> 0 of total weight 1
        g = MeanPayoffGame.of(2, 2, [(0, 2, 1), (2, 1, 0), (1, 3, 0), (3, 0, 0)])
        assert value_bruteforce(g) == Fraction(1, 4)
        assert mean_values(g)[0] == Fraction(1, 4)
        assert decide(g)

    def test_cap(self):
        g = MeanPayoffGame.of(7, 6, [(u, 7, 0) for u in range(7)] + [(v, 0, 0) for v in range(7, 13)])
        with pytest.raises(BudgetExceeded):
            value_bruteforce(g)


class TestConstructions:
    def test_negate_examples(self):
        assert not decide(negate(cycle(1)))
        assert decide(negate(cycle(0)))

    def test_combine_examples(self):
        assert decide(combine_and([cycle(1)]))
        assert not decide(combine_and([cycle(1), cycle(-1)]))
        assert decide(combine_and([cycle(1), cycle(1)]))

    def test_combine_empty(self):
        with pytest.raises(ValueError):
            combine_and([])


@given(games())
def test_decide_matches_bruteforce(g):
    assert decide(g) == (value_bruteforce(g) > 0)


@given(games())
def test_mean_values_match_bruteforce(g):
    v = mean_values(g)[g.start]
    assert v == value_bruteforce(g)
    assert v.denominator <= g.nvertices


@given(games())
def test_double_negation(g):
    assert decide(negate(negate(g))) == decide(g)
