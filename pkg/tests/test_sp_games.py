import itertools
import math
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightgames.sp_games import (
    CYCLE,
    NormalizationError,
    SpInstance,
    TerminalGame,
    bellman_ford_path,
    bipartitize,
    bisp_check,
    bisp_equivalence_check,
    c22_holds,
    c_holds,
    cprime22_holds,
    cprime_holds,
    dijkstra_path,
    enumerate_bipartite_instances,
    find_sp_ne,
    is_bipartite,
    is_symmetric,
    merge_inner_outcomes,
    normalize,
    perturbed_costs,
    play_sp,
    player_strategies,
    random_bipartite_instance,
    random_costs,
    random_symmetric_instance,
    sp_game_form,
    sp_inner_form,
    sp_vplus_form,
    terminal_mode,
    terminal_ne,
    terminal_ne_exists,
)
from tightgames.vplus import is_vplus_tight

EXHAUSTIVE = list(enumerate_bipartite_instances(4))


def seeded(seed):
    return np.random.Generator(np.random.Philox(seed))


def triangle(costs=((1, 1, 1, 1), (1, 1, 1, 1))):
    # s (Alice) -> a (Bob) -> t, s -> t, a -> s
    return SpInstance((0, 1, None), [(0, 1), (0, 2), (1, 2), (1, 0)], 0, 2, costs)


def walk(inst, choice):
    v, seen, path = inst.s, {inst.s}, []
    while v != inst.t:
        e = choice[v]
        path.append(e)
        v = inst.edges[e][1]
        if v in seen:
            return None
        seen.add(v)
    return tuple(path)


def oracle_best_paths(inst, fixed_player, lengths):
    """For each mapping of ``fixed_player``, the other player's cheapest play."""
    other = 1 - fixed_player
    mine, theirs = inst.vertices_of(fixed_player), inst.vertices_of(other)
    out = set()
    for a in itertools.product(*(inst.out_edges(v) for v in mine)):
        best = None
        for b in itertools.product(*(inst.out_edges(v) for v in theirs)):
            p = walk(inst, dict(zip(mine, a)) | dict(zip(theirs, b)))
            cost = math.inf if p is None else sum(lengths[e] for e in p)
            if best is None or cost < best[0]:
                best = (cost, p)
        out.add(CYCLE if best[1] is None else best[1])
    return out


def oracle_sp_ne_exists(inst):
    movers = [v for v in range(inst.n) if v != inst.t]
    opts = [inst.out_edges(v) for v in movers]

    def cost(i, choice):
        p = walk(inst, choice)
        return math.inf if p is None else sum(inst.costs[i][e] for e in p)

    for picks in itertools.product(*opts):
        choice = dict(zip(movers, picks))
        ok = True
        for i in range(inst.n_players):
            mine = [k for k, v in enumerate(movers) if inst.owners[v] == i]
            cur = cost(i, choice)
            for alt in itertools.product(*(opts[k] for k in mine)):
                dev = dict(choice)
                dev.update({movers[k]: e for k, e in zip(mine, alt)})
                if cost(i, dev) < cur:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------- instances


def test_instance_validation():
    with pytest.raises(ValueError):
        SpInstance((0, None), [(0, 1)], 0, 0, [[1]])
    with pytest.raises(ValueError):
        SpInstance((0, 1), [(0, 1)], 0, 1, [[1]])
    with pytest.raises(ValueError):
        SpInstance((0, None), [(1, 0)], 0, 1, [[1]])
    with pytest.raises(ValueError):
        SpInstance((0, None), [(0, 1)], 0, 1, [[1, 2]])


def test_normalize_examples():
    # vertex 2 is a dead end; the loop at 1 lies on no simple s-t path
    raw = SpInstance((0, 1, 0, None), [(0, 1), (1, 3), (0, 2), (1, 1)], 0, 3, [[1, 2, 3, 4], [5, 6, 7, 8]])
    assert set(raw.violations()) == {"dead-end", "useless-edge"}
    inst = normalize(raw)
    assert inst.owners == (0, 1, None)
    assert inst.edges == ((0, 1), (1, 2), (0, 2))
    assert inst.costs == ((1, 2, 3), (5, 6, 7))
    assert inst.violations() == []
    assert normalize(inst) == inst
    with pytest.raises(NormalizationError):
        normalize(SpInstance((0, 1, None), [(0, 1), (1, 0)], 0, 2, [[1, 1], [1, 1]]))


def test_normalize_is_idempotent_on_random(rng):
    for _ in range(100):
        inst = random_bipartite_instance(rng, int(rng.integers(2, 6)))
        if inst is None:
            continue
        assert inst.violations() == []
        assert normalize(inst) == inst


def test_bipartitize_splits_costs():
    inst = SpInstance((0, 0, None), [(0, 1), (1, 2)], 0, 2, [[4, 1], [6, 1]])
    assert not is_bipartite(inst)
    b = bipartitize(inst)
    assert is_bipartite(b)
    assert b.owners == (0, 0, None, 1)
    assert b.edges == ((0, 3), (3, 1), (1, 2))
    assert b.costs == ((2, 2, 1), (3, 3, 1))
    assert len(b.simple_paths()) == len(inst.simple_paths())


def test_play_examples():
    single = SpInstance((0, None), [(0, 1)], 0, 1, [[3], [5]])
    p = play_sp(single, ((0,), ()))
    assert p.outcome == (0,) and p.costs == (3, 5)
    inst = triangle(((1, 2, 3, 4), (5, 6, 7, 8)))
    p = play_sp(inst, ((0,), (3,)))
    assert p.outcome == CYCLE and p.costs == (math.inf, math.inf)
    p = play_sp(inst, ((0,), (2,)))
    assert p.outcome == (0, 2) and p.costs == (4, 12)
    with pytest.raises(ValueError):
        play_sp(inst, ((2,), (2,)))


def test_play_cost_is_dot_with_path_vector(rng):
    for inst in EXHAUSTIVE[:40]:
        inst = random_costs(inst, rng)
        gpv = sp_vplus_form(inst)
        xs, ys = player_strategies(inst, 0), player_strategies(inst, 1)
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                p = play_sp(inst, (x, y))
                w = gpv.table[i][j]
                if p.path is None:
                    assert w is None
                else:
                    for k in range(2):
                        assert p.costs[k] == sum(a * b for a, b in zip(inst.costs[k], w))


def test_triangle_forms():
    inst = triangle()
    g, labels = sp_game_form(inst)
    assert labels == [(0, 2), (1,), CYCLE]
    assert g.to_lists() == [[0, 2], [1, 1]]
    gpv = sp_vplus_form(inst)
    assert gpv.table[0][1] is None and gpv.table[1][0] == gpv.table[1][1]
    gi, li = sp_inner_form(inst)
    assert li[-1] == ("scc", 0)
    assert merge_inner_outcomes(gi, li) == (g, labels)


def test_every_sp_vplus_form_is_tight():
    for inst in EXHAUSTIVE:
        if len(player_strategies(inst, 0)) * len(player_strategies(inst, 1)) <= 64:
            assert is_vplus_tight(sp_vplus_form(inst)).tight


# ---------------------------------------------------------------- shortest paths


def test_perturbation_is_tie_free_and_order_preserving(rng):
    for inst in EXHAUSTIVE[::4]:
        inst = random_costs(inst, rng, high=3)
        paths = inst.simple_paths()
        for row, prow in zip(inst.costs, perturbed_costs(inst)):
            orig = [sum(row[e] for e in p) for p in paths]
            pert = [sum(prow[e] for e in p) for p in paths]
            assert len(set(pert)) == len(pert)
            for a, b in itertools.combinations(range(len(paths)), 2):
                if orig[a] < orig[b]:
                    assert pert[a] < pert[b]


def _nx_distance(inst, lengths, fixed):
    g = nx.MultiDiGraph()
    g.add_nodes_from(range(inst.n))
    for e, (u, w) in enumerate(inst.edges):
        if u not in fixed or fixed[u] == e:
            g.add_edge(u, w, weight=lengths[e])
    try:
        return nx.dijkstra_path_length(g, inst.s, inst.t)
    except nx.NetworkXNoPath:
        return None


def test_dijkstra_matches_networkx_and_bellman_ford(rng):
    for _ in range(200):
        inst = random_bipartite_instance(rng, int(rng.integers(3, 8)))
        if inst is None:
            continue
        lengths = [int(v) for v in rng.integers(1, 20, inst.m)]
        vs = inst.vertices_of(0)
        fixed = {v: int(rng.choice(inst.out_edges(v))) for v in vs if rng.random() < 0.5}
        d = dijkstra_path(inst, lengths, fixed)
        b = bellman_ford_path(inst, lengths, fixed)
        ref = _nx_distance(inst, lengths, fixed)
        if ref is None:
            assert d is None and b is None
            continue
        assert d[0] == b[0] == ref
        assert sum(lengths[e] for e in d[1]) == ref
        assert all(fixed.get(inst.edges[e][0], e) == e for e in d[1])


# ---------------------------------------------------------------- Bi-SP


def test_bisp_triangle():
    res = bisp_check(triangle())
    assert res.SA == {(0, 2), (1,)} and res.SB == {(1,)}
    assert res.intersects and not res.weak_only
    with pytest.raises(ValueError):
        bisp_check(triangle(((0, 1, 1, 1), (1, 1, 1, 1))))


def test_bisp_against_brute_force(rng):
    for inst in EXHAUSTIVE:
        inst = random_costs(inst, rng)
        res = bisp_check(inst)
        uA, uB = perturbed_costs(inst)
        assert res.SA == oracle_best_paths(inst, 0, uB)
        assert res.SB == oracle_best_paths(inst, 1, uA)
        assert bisp_check(inst, oracle=bellman_ford_path) == res
        assert res.intersects


def test_bisp_bridge_to_terminal_ne(rng):
    for inst in EXHAUSTIVE[::2]:
        inst = random_costs(inst, rng)
        assert bisp_check(inst).intersects == terminal_ne_exists(inst)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(5, 7))
def test_bisp_random_instances(seed, n):
    inst = random_bipartite_instance(seeded(seed), n)
    if inst is None:
        return
    res = bisp_check(inst)
    assert res.intersects
    assert res.intersects == terminal_ne_exists(inst)


# ---------------------------------------------------------------- n-person SP games


def test_find_sp_ne_matches_brute_force(rng):
    for _ in range(60):
        inst = random_symmetric_instance(rng, int(rng.integers(2, 4)), int(rng.integers(2, 5)))
        if inst is None:
            continue
        assert (find_sp_ne(inst) is not None) == oracle_sp_ne_exists(inst)


def test_symmetric_instances_have_ne_and_one_inner_outcome(rng):
    seen = 0
    while seen < 100:
        inst = random_symmetric_instance(rng, 2, int(rng.integers(2, 6)))
        if inst is None:
            continue
        seen += 1
        assert is_symmetric(inst)
        assert find_sp_ne(inst) is not None
        _, labels = sp_inner_form(inst)
        assert sum(1 for o in labels if o[0] == "scc") <= 1


# ---------------------------------------------------------------- terminal games


def test_predicates():
    assert c_holds([[1, 2], [3, 4]], [5, 5])
    assert not c_holds([[1, 2], [3, 5]], [5, 5])
    assert c22_holds([[6, 7], [6, 7], [1, 1]], [5, 5, 5])
    assert not c22_holds([[6, 7], [6, 1], [1, 1]], [5, 5, 5])
    assert cprime_holds([[1, 2], [1, 2]], [[3, 4], [3]])
    assert not cprime_holds([[1, 2], [1, 2]], [[3, 2], [3]])
    assert cprime22_holds([[5, 6], [5, 6]], [[4, 9], [1]])
    assert not cprime22_holds([[5, 6], [5, 6]], [[4, 9], []])


def test_terminal_ne_examples():
    tc = ({1: Fraction(3)},)
    g = TerminalGame((0, None), ((0, 1), (0, 0)), 0, tc, ({0: Fraction(5)},))
    assert g.inner_keys() == [0]
    assert terminal_ne(g) == {0: 0}
    g = TerminalGame((0, None), ((0, 1), (0, 0)), 0, tc, ({0: Fraction(1)},))
    assert terminal_ne(g) == {0: 1}


def test_terminal_mode_splits_sink():
    inst = triangle(((1, 2, 3, 4), (5, 6, 7, 8)))
    game = terminal_mode(inst, inst.costs, ({0: 100}, {0: 100}))
    assert game.terminals == [2, 3, 4]
    assert game.edges == ((0, 1), (0, 3), (1, 4), (1, 0))
    assert game.terminal_costs[0] == {3: 2, 4: 3}


def test_inner_merge_keeps_ne(rng):
    corpus = [inst for inst in EXHAUSTIVE if any(o[0] == "scc" for o in sp_inner_form(inst)[1])]
    assert corpus
    for inst in corpus:
        r = bisp_equivalence_check(random_costs(inst, rng), rng)
        assert r["inner_outcomes"] >= 1
        assert r["ne_kept"] == r["ne_before"]
