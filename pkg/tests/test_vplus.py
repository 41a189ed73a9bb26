import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightgames.tightness import BudgetExceeded
from tightgames.vplus import (
    WC,
    VPlusForm,
    asumability_filter,
    degeneracy,
    delete_degenerate,
    is_degenerate_ne,
    is_pbr,
    is_vplus_tight,
    ne_exists_batch,
    ne_set,
    pbr_list,
    random_vplus_form,
    response_choices,
)


def V(*xs):
    return tuple(Fraction(x) for x in xs)


def oracle_ne(gpv, uA, uB):
    def cost(u, w):
        return math.inf if w is None else sum(Fraction(a) * b for a, b in zip(u, w))

    t = gpv.table
    nx, ny = gpv.shape
    ca = [[cost(uA, w) for w in r] for r in t]
    cb = [[cost(uB, w) for w in r] for r in t]
    return [
        (x, y)
        for x in range(nx)
        for y in range(ny)
        if all(ca[i][y] >= ca[x][y] for i in range(nx)) and all(cb[x][j] >= cb[x][y] for j in range(ny))
    ]


@st.composite
def vplus_forms(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_vplus_form(np.random.Generator(np.random.Philox(seed)))


def test_validation():
    with pytest.raises(ValueError):
        VPlusForm([[V(0, 0)]])
    with pytest.raises(ValueError):
        VPlusForm([[V(-1, 2)]])
    with pytest.raises(ValueError):
        VPlusForm([[WC]])
    with pytest.raises(ValueError):
        VPlusForm([[V(1), V(1, 2)]])
    # a vector on an L-shaped cell set is not weakly rectangular
    a, b = V(1, 0), V(0, 1)
    with pytest.raises(ValueError):
        VPlusForm([[a, a], [a, b]])
    assert VPlusForm([[WC]], dim=2).shape == (1, 1)


def test_degeneracy_examples():
    a = V(1, 0)
    g = VPlusForm([[WC, WC], [a, WC]])
    d = degeneracy(g)
    assert d.rows == {0} and d.cols == {1} and not d.form
    assert is_degenerate_ne(g, 0, 1)
    assert not is_degenerate_ne(g, 0, 0)
    assert degeneracy(VPlusForm([[WC, WC]], dim=1)).form


def test_pbr_examples():
    g = VPlusForm([[V(1, 0), V(0, 1)]])
    for k in (0, 1):
        c = is_pbr(g, (k,), "bob")
        assert c is not None and c.check(g) and min(c.u) >= 1
    # a vector dominating its rival is never a best response
    g = VPlusForm([[V(1, 1), V(2, 2)], [V(1, 0), V(0, 1)]])
    assert is_pbr(g, (1, 0), "bob") is None
    assert is_pbr(g, (0, 0), "bob") is not None
    # WC can be chosen only in an all-WC line
    g = VPlusForm([[V(1), WC]])
    assert is_pbr(g, (1,), "bob") is None
    with pytest.raises(ValueError):
        is_pbr(g, (0, 0), "bob")
    with pytest.raises(ValueError):
        is_pbr(g, (0,), "carol")


def test_response_choices_collapse_repeats():
    a = V(1, 0)
    g = VPlusForm([[a, a, V(0, 1)]])
    assert response_choices(g, "bob") == [(0,), (2,)]


def test_degenerate_forms_are_tight():
    assert is_vplus_tight(VPlusForm([[WC, WC], [WC, WC]], dim=2)).tight
    a, b = V(1, 0), V(0, 1)
    g = VPlusForm([[WC, WC], [a, WC], [b, WC]])
    d = degeneracy(g)
    assert d.rows and d.cols
    assert is_vplus_tight(g).tight


def test_non_tight_example():
    # matching pennies with unit vectors
    a, b, c, d = V(1, 0, 0, 0), V(0, 1, 0, 0), V(0, 0, 1, 0), V(0, 0, 0, 1)
    g = VPlusForm([[a, b], [c, d]])
    res = is_vplus_tight(g)
    assert not res.tight
    assert res.phi.check(g) and res.psi.check(g)
    assert ne_set(g, res.psi.u, res.phi.u) == []


def test_ne_set_examples():
    a, b = V(1, 2), V(2, 1)
    g = VPlusForm([[a, b]])
    assert ne_set(g, (1, 1), (1, 3)) == [(0, 1)]
    assert ne_set(g, (1, 1), (1, 1)) == [(0, 0), (0, 1)]
    with pytest.raises(ValueError):
        ne_set(g, (0, 1), (1, 1))
    with pytest.raises(ValueError):
        ne_set(g, (1,), (1, 1))
    g = VPlusForm([[WC]], dim=1)
    assert ne_set(g, (1,), (1,)) == [(0, 0)]


def test_asumability_examples():
    a, b, c, d = V(1, 0), V(0, 1), V(2, 0), V(0, 2)
    g = VPlusForm([[a, c], [b, d]])
    # phi1 picks the bigger vector in both rows
    assert asumability_filter(g, "bob", (0, 1), (1, 1), (0, 0)) == "reject-phi1"
    assert asumability_filter(g, "bob", (0, 1), (0, 0), (1, 1)) == "pass"
    assert asumability_filter(g, "bob", (0,), (1,), (0,)) == "reject-phi1"
    # equal sums (3, 3) on two lines
    g = VPlusForm([[V(2, 0), V(0, 2)], [V(1, 3), V(3, 1)]])
    assert asumability_filter(g, "bob", (0, 1), (0, 0), (1, 1)) == "reject-both"
    # repeated vectors are outside the filter's domain
    g = VPlusForm([[V(1, 0), V(0, 1)], [V(0, 1), V(1, 0)]], require_weakly_rectangular=False)
    with pytest.raises(ValueError):
        asumability_filter(g, "bob", (0, 1), (0, 1), (1, 0))
    with pytest.raises(ValueError):
        asumability_filter(g, "bob", (), (), ())


def test_delete_degenerate():
    a, b = V(1, 0), V(0, 1)
    g = VPlusForm([[WC, WC], [a, b]])
    assert delete_degenerate(g) == VPlusForm([[a, b]])
    assert is_vplus_tight(delete_degenerate(g)).tight == is_vplus_tight(g).tight
    # both players degenerate: unchanged
    g = VPlusForm([[WC, WC], [a, WC]])
    assert delete_degenerate(g) == g


def test_budget_guard():
    g = VPlusForm([[V(1 + 4 * i + j) for j in range(4)] for i in range(4)])
    with pytest.raises(BudgetExceeded):
        is_vplus_tight(g, budget=10)


@settings(max_examples=100, deadline=None)
@given(vplus_forms(), st.data())
def test_ne_set_and_batch_match_oracle(g, data):
    pos = st.integers(1, 6)
    uA = [data.draw(pos) for _ in range(g.dim)]
    uB = [data.draw(pos) for _ in range(g.dim)]
    ne = ne_set(g, uA, uB)
    assert ne == oracle_ne(g, uA, uB)
    assert ne_exists_batch(g, np.array([uA]), np.array([uB]))[0] == bool(ne)
    nondeg = [p for p in ne if g.table[p[0]][p[1]] is not None]
    assert ne_exists_batch(g, np.array([uA]), np.array([uB]), non_degenerate=True)[0] == bool(nondeg)


@settings(max_examples=100, deadline=None)
@given(vplus_forms(), st.data())
def test_sampled_unique_best_responses_are_pbr(g, data):
    # any positive u with a unique best vector per row makes that response a PBR
    pos = st.integers(1, 9)
    u = [data.draw(pos) for _ in range(g.dim)]
    strat = []
    for row in g.table:
        finite = [(sum(a * b for a, b in zip(u, w)), w) for w in row if w is not None]
        if not finite:
            strat.append(0)
            continue
        best = min(c for c, _ in finite)
        winners = {w for c, w in finite if c == best}
        if len(winners) > 1:
            return
        strat.append(row.index(winners.pop()))
    cert = is_pbr(g, strat, "bob")
    assert cert is not None and cert.check(g)


@settings(max_examples=80, deadline=None)
@given(vplus_forms(), st.data())
def test_tightness_and_nash_existence(g, data):
    res = is_vplus_tight(g)
    if res.tight:
        d = degeneracy(g)
        pos = st.integers(1, 9)
        for _ in range(5):
            uA = [data.draw(pos) for _ in range(g.dim)]
            uB = [data.draw(pos) for _ in range(g.dim)]
            ne = oracle_ne(g, uA, uB)
            assert ne
            if not (d.rows and d.cols):
                assert any(g.table[x][y] is not None for x, y in ne)
    else:
        assert oracle_ne(g, res.psi.u, res.phi.u) == []


@settings(max_examples=60, deadline=None)
@given(vplus_forms())
def test_pbr_lists_are_certified(g):
    for side in ("bob", "alice"):
        for c in pbr_list(g, side):
            assert c.check(g)
    assert is_vplus_tight(g).tight == is_vplus_tight(g.transpose()).tight
