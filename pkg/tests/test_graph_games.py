import networkx as nx
import pytest

from tightgames.core_forms import GameForm
from tightgames.graph_games import (
    CYCLE,
    GameGraph,
    merge_outcomes,
    normal_form,
    play,
    random_game_graph,
    scc_decompose,
    solve_win_lose,
    strategies,
    tarjan_scc,
)
from tightgames.graph_games import strategy_space_size
from tightgames.tightness import BudgetExceeded, is_tight

from conftest import oracle_saddle_exists, oracle_tight


def reach(adj):
    n = len(adj)
    r = [{v} for v in range(n)]
    for v in range(n):
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in r[v]:
                    r[v].add(w)
                    stack.append(w)
    return r


def test_tarjan_examples():
    assert tarjan_scc([[1], [0], []]) == [[2], [0, 1]] or tarjan_scc([[1], [0], []]) == [[0, 1], [2]]
    assert tarjan_scc([[1], [2], []]) == [[2], [1], [0]]
    assert tarjan_scc([[0]]) == [[0]]


def test_tarjan_against_reachability_oracle(rng):
    n = 50
    adj = [[w for w in range(n) if rng.random() < 0.05] for _ in range(n)]
    comps = tarjan_scc(adj)
    r = reach(adj)
    assert sorted(v for c in comps for v in c) == list(range(n))
    pos = {}
    for i, c in enumerate(comps):
        for v in c:
            pos[v] = i
    for u in range(n):
        for w in range(n):
            same = w in r[u] and u in r[w]
            assert (pos[u] == pos[w]) == same
            # sinks first: anything u reaches sits no later than u
            if w in r[u]:
                assert pos[w] <= pos[u]
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from((u, w) for u in range(n) for w in adj[u])
    assert {frozenset(c) for c in comps} == {frozenset(c) for c in nx.strongly_connected_components(g)}


def test_tarjan_deep_chain_is_iterative():
    n = 20000
    adj = [[v + 1] for v in range(n - 1)] + [[0]]
    assert len(tarjan_scc(adj)) == 1


def test_graph_validation():
    with pytest.raises(ValueError):
        GameGraph(["A", "T"], [(1, 0)], 0)
    with pytest.raises(ValueError):
        GameGraph(["A", "B"], [(0, 1)], 0)
    with pytest.raises(ValueError):
        GameGraph(["T"], [], 0)
    with pytest.raises(ValueError):
        GameGraph(["X"], [(0, 0)], 0)


def test_decomposition_kinds():
    gr = GameGraph(["A", "B", "T", "A"], [(0, 1), (1, 0), (1, 2), (0, 3), (3, 3)], 0)
    dec = scc_decompose(gr)
    kinds = {tuple(m): k for m, k in zip(dec.members, dec.kind)}
    assert kinds == {(0, 1): "cyclic", (2,): "terminal", (3,): "cyclic"}
    gr = GameGraph(["A", "T"], [(0, 1)], 0)
    assert scc_decompose(gr).kind[scc_decompose(gr).component_of[0]] == "transient"


def test_play_examples():
    gr = GameGraph(["A", "B", "T"], [(0, 1), (0, 2), (1, 0), (1, 2)], 0)
    p = play(gr, (0,), (2,))
    assert p.path == (0, 1) and p.cycle_start == 0 and p.terminal is None and p.cycle_edges == (0, 2)
    p = play(gr, (1,), (2,))
    assert p.terminal == 2 and p.edges == (1,)
    with pytest.raises(ValueError):
        play(gr, (2,), (2,))
    with pytest.raises(ValueError):
        play(gr, (0, 1), (2,))


def test_two_by_one_normal_form():
    gr = GameGraph(["A", "T", "T"], [(0, 1), (0, 2)], 0)
    g, labels = normal_form(gr)
    assert g.shape == (2, 1) and g.to_lists() == [[0], [1]] and len(labels) == 2


def test_normal_form_budget():
    gr = GameGraph(["A"] * 3 + ["T"], [(v, w) for v in range(3) for w in range(4)], 0)
    with pytest.raises(BudgetExceeded):
        normal_form(gr, budget=10)


def _merged_msdggs(graph):
    g, labels = normal_form(graph, "msdggs")
    dec = scc_decompose(graph)
    term = [i for i, c in enumerate(labels) if dec.kind[c] == "terminal"]
    cyc = [i for i, c in enumerate(labels) if dec.kind[c] == "cyclic"]
    blocks = [[i] for i in term] + ([cyc] if cyc else [])
    return merge_outcomes(g, blocks), [labels[i] for i in term] + ([CYCLE] if cyc else [])


def test_dggs_is_merged_msdggs(rng):
    done = 0
    while done < 60:
        gr = random_game_graph(rng, 6)
        if strategy_space_size(gr, "A") * strategy_space_size(gr, "B") > 2048:
            continue
        done += 1
        gd, ld = normal_form(gr, "dggs")
        gm, lm = _merged_msdggs(gr)
        # same partition of profiles, labels line up after sorting terminals first
        assert ld == lm
        assert gd == gm


def test_solver_examples():
    # Alice at 0 can go to terminal 1 or loop through Bob
    gr = GameGraph(["A", "T", "B"], [(0, 1), (0, 2), (2, 0)], 0)
    dec = scc_decompose(gr)
    t = dec.component_of[1]
    c = dec.component_of[0]
    assert solve_win_lose(gr, [t], [c])[0] == "A"
    assert solve_win_lose(gr, [c], [t])[0] == "A"
    assert solve_win_lose(gr, [], [t, c])[0] == "B"
    assert solve_win_lose(gr, [CYCLE], [t])[0] == "A"
    with pytest.raises(ValueError):
        solve_win_lose(gr, [t], [t, c])
    with pytest.raises(ValueError):
        solve_win_lose(gr, [t], [])


def test_solver_matches_normal_form_saddle(rng):
    checked = 0
    while checked < 150:
        gr = random_game_graph(rng, 7)
        if strategy_space_size(gr, "A") * strategy_space_size(gr, "B") > 2048:
            continue
        dec = scc_decompose(gr)
        for mode in ("msdggs", "dggs"):
            g, labels = normal_form(gr, mode)
            OA = [o for o in labels if rng.random() < 0.5]
            OB = [o for o in labels if o not in OA]
            if mode == "msdggs":
                extra = [o for o in dec.outcomes() if o not in labels]
                OB += extra
            else:
                extra = [c for c in dec.outcomes() if dec.kind[c] == "terminal" and c not in labels]
                OB += extra
                if CYCLE not in labels and any(k == "cyclic" for k in dec.kind):
                    OB.append(CYCLE)
            win = solve_win_lose(gr, OA, OB, dec)[gr.v0]
            m = [[1 if labels[o] in OA else -1 for o in row] for row in g.to_lists()]
            assert oracle_saddle_exists(m)
            assert (max(min(r) for r in m) == 1) == (win == "A")
            nx_, ny_ = g.shape
            if ny_**nx_ + nx_**ny_ <= 5000:
                assert oracle_tight(g.to_lists())
            else:
                assert is_tight(g)
            checked += 1


def test_strategies_enumeration():
    gr = GameGraph(["A", "B", "T"], [(0, 1), (0, 2), (1, 0), (1, 2)], 0)
    assert strategies(gr, "A") == [(0,), (1,)]
    assert strategies(gr, "B") == [(2,), (3,)]


def test_merge_examples(fig1):
    g2 = fig1["g2"]
    assert is_tight(merge_outcomes(g2, [[0], [1, 2], [3]]))
    assert merge_outcomes(g2, [[0], [1], [2], [3]]) == g2
    assert merge_outcomes(g2, [[0, 1, 2, 3]]).to_lists() == [[0] * 4, [0] * 4]
    with pytest.raises(ValueError):
        merge_outcomes(g2, [[0, 1], [1, 2, 3]])
    with pytest.raises(ValueError):
        merge_outcomes(g2, [[0, 1]])


def test_merge_can_create_tightness():
    g = GameForm([[0, 1], [1, 2]])
    assert not is_tight(g)
    assert is_tight(merge_outcomes(g, [[0], [1, 2]]))


def test_solver_scales_linearly():
    # a long alternating chain is solved without enumerating strategies
    n = 5000
    owners = ["A" if v % 2 == 0 else "B" for v in range(n)] + ["T", "T"]
    edges = [(v, v + 1) for v in range(n - 1)] + [(v, n) for v in range(n)] + [(n - 1, n + 1)]
    gr = GameGraph(owners, edges, 0)
    dec = scc_decompose(gr)
    win = solve_win_lose(gr, [dec.component_of[n]], [dec.component_of[n + 1]], dec)
    assert win[0] == "A" and len(win) == n + 2
