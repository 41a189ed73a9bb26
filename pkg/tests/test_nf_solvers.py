from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightgames.core_forms import GameForm, all_forms, basic_strategies, is_simple
from tightgames.nf_solvers import (
    NEGuaranteeViolated,
    check_lex_ne,
    is_nash_equilibrium,
    is_nash_solvable,
    is_win_lose_solvable,
    is_zero_sum_solvable,
    lex_safe_ne,
    lex_safe_ne_swapped,
    lex_safe_pair,
    lex_safe_strategy,
    matrix_saddle,
    nash_equilibria,
    order_values,
    saddle_point,
    solvability_report,
)
from tightgames.tightness import is_tight

from conftest import oracle_ne, oracle_saddle_exists, oracle_tight
from strategies import game_forms, rewards

TIGHT_CORPUS = [g for g in all_forms(3, 3, 3) if g.n_outcomes >= 2 and oracle_tight(g.to_lists())]


def _tables(g, rA, rB):
    t = g.to_lists()
    return [[rA[o] for o in r] for r in t], [[rB[o] for o in r] for r in t]


def test_nash_equilibria_examples(fig1):
    assert (0, 0) in nash_equilibria(fig1["g1"], (2, 1, 0), (2, 1, 0))
    assert nash_equilibria(fig1["g7"], (1, 0), (0, 1)) == []
    assert nash_equilibria(fig1["g7"], (1, 0), (1, 0)) == [(0, 0), (1, 1)]
    with pytest.raises(ValueError):
        nash_equilibria(fig1["g7"], (1,), (1, 0))


def test_order_values():
    assert order_values([2, 0, 1]) == [2, 1, 3]


def test_matrix_saddle_examples():
    r = matrix_saddle([[3, 1], [4, 2]])
    assert r.exists and r.situation == (1, 1) and r.maxmin == r.minmax == 2
    r = matrix_saddle([[1, -1], [-1, 1]])
    assert not r.exists and (r.maxmin, r.minmax) == (-1, 1)


def test_saddle_point_on_form(fig1):
    sp = saddle_point(fig1["g1"], (Fraction(1, 2), 0, 1))
    assert sp.exists and sp.maxmin == Fraction(1, 2)


@pytest.mark.parametrize("name", [f"g{i}" for i in range(1, 10)])
def test_figure1_solvability(fig1, name):
    g = fig1["g" + name[1:]]
    rep = solvability_report(g)
    assert rep.consistent and rep.tight == (int(name[1:]) <= 6)
    if not rep.tight:
        ra, rb = rep.counterexample["nash"]
        assert nash_equilibria(g, ra, rb) == []
        r = rep.counterexample["zerosum"]
        assert not saddle_point(g, r).exists
        r = rep.counterexample["winlose"]
        assert set(r) <= {-1, 1} and not saddle_point(g, r).exists


def test_g2_g9_zero_sum_and_win_lose(fig1):
    assert is_zero_sum_solvable(fig1["g2"]) and is_win_lose_solvable(fig1["g2"])
    assert not is_zero_sum_solvable(fig1["g9"]) and not is_win_lose_solvable(fig1["g9"])


def test_nash_solvable_needs_rng_when_large():
    g = GameForm([[0, 1, 2, 3], [4, 5, 6, 7]])
    with pytest.raises(ValueError):
        is_nash_solvable(g)


def test_lex_safe_examples(fig1):
    assert lex_safe_strategy(fig1["g1"], (2, 1, 0)) == 0
    # a support that is a proper prefix ranks above its extension
    assert lex_safe_strategy(GameForm([[0, 1], [0, 0]]), (0, 1)) == 1
    with pytest.raises(NEGuaranteeViolated):
        lex_safe_ne(fig1["g7"], (1, 0), (0, 1))


def test_lex_safe_g3_random_rational(fig1, rng):
    g = fig1["g3"]
    brows, bcols = basic_strategies(g)
    for _ in range(100):
        rA = [Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 6))) for _ in range(g.n_outcomes)]
        rB = [Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 6))) for _ in range(g.n_outcomes)]
        x, y = lex_safe_ne(g, rA, rB)
        assert is_nash_equilibrium(g, rA, rB, x, y)
        assert is_simple(g, x, y) and x in brows and y in bcols


def test_lex_pair_counterexample_frozen():
    # both safe strategies separately, but not jointly an NE
    g = GameForm([[0, 0], [1, 2]])
    rA, rB = [2, 1, 3], [3, 1, 2]
    assert lex_safe_pair(g, rA, rB) == (0, 1)
    assert not is_nash_equilibrium(g, rA, rB, 0, 1)


def test_lex_pair_zero_sum_on_corpus(rng):
    for g in TIGHT_CORPUS:
        rA = order_values(rng.permutation(g.n_outcomes).tolist())
        neg = [-v for v in rA]
        x, y = lex_safe_pair(g, rA, neg)
        assert is_nash_equilibrium(g, rA, neg, x, y)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(TIGHT_CORPUS), st.data())
def test_lex_ne_on_tight_forms(g, data):
    rA = data.draw(rewards(g.n_outcomes))
    rB = data.draw(rewards(g.n_outcomes))
    x, y = check_lex_ne(g, rA, rB)
    assert (x, y) in oracle_ne(*_tables(g, rA, rB))
    x, y = lex_safe_ne_swapped(g, rA, rB)
    assert is_nash_equilibrium(g, rA, rB, x, y)


@settings(max_examples=200, deadline=None)
@given(game_forms(3, 3, 4), st.data())
def test_nash_equilibria_matches_oracle(g, data):
    rA = data.draw(rewards(g.n_outcomes))
    rB = data.draw(rewards(g.n_outcomes))
    assert nash_equilibria(g, rA, rB) == oracle_ne(*_tables(g, rA, rB))
    m = _tables(g, rA, rA)[0]
    assert saddle_point(g, rA).exists == oracle_saddle_exists(m)


@settings(max_examples=150, deadline=None)
@given(game_forms(3, 3, 4))
def test_four_way_equivalence(g):
    rep = solvability_report(g)
    assert rep.consistent
    assert rep.tight == is_tight(g) == oracle_tight(g.to_lists())


@settings(max_examples=100, deadline=None)
@given(game_forms(3, 3, 4), st.data())
def test_ne_survives_collapsing_adjacent_values(g, data):
    k = g.n_outcomes
    rA = order_values(data.draw(st.permutations(range(k))))
    rB = order_values(data.draw(st.permutations(range(k))))
    for x, y in nash_equilibria(g, rA, rB):
        if k < 2:
            break
        lvl = data.draw(st.integers(1, k - 1))
        merged = [lvl if v == lvl + 1 else v for v in rA]
        assert is_nash_equilibrium(g, merged, rB, x, y)
