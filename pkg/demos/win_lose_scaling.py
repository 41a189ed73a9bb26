"""solve_win_lose grows linearly with the graph; brute force would not."""

# %%
import time

import numpy as np

from tightgames.graph_games import GameGraph, scc_decompose, solve_win_lose

rng = np.random.Generator(np.random.Philox(3))


def random_arena(n, deg=3):
    owners = ["A" if rng.random() < 0.5 else "B" for _ in range(n)] + ["T", "T"]
    edges = [(u, int(w)) for u in range(n) for w in rng.integers(0, n + 2, deg)]
    return GameGraph(owners, edges, 0)


# %%
for n in (1_000, 4_000, 16_000, 64_000):
    g = random_arena(n)
    dec = scc_decompose(g)
    alice = [dec.component_of[n]]
    bob = [c for c in dec.outcomes() if c not in alice]
    t = time.perf_counter()
    win = solve_win_lose(g, alice, bob, dec)
    dt = time.perf_counter() - t
    print(f"|V|={n + 2:6d} |E|={len(g.edges):7d}  {dt * 1e6 / len(g.edges):.2f} us/edge  winner at v0: {win[0]}")
