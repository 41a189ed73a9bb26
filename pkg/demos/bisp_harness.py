"""Bi-SP check on a tiny instance, then a short seeded search."""

# %%
from tightgames.sp_games import SpInstance, bisp_check, bisp_search, sp_game_form, terminal_ne_exists

# s (Alice) -> a (Bob) -> t, with a shortcut s -> t and a move back a -> s
inst = SpInstance((0, 1, None), [(0, 1), (0, 2), (1, 2), (1, 0)], 0, 2, [[1, 3, 1, 1], [2, 1, 1, 1]])
g, labels = sp_game_form(inst)
print(g.to_lists(), labels)

# %%
res = bisp_check(inst)
print("Bob's paths  ", sorted(map(str, res.SA)))
print("Alice's paths", sorted(map(str, res.SB)))
print("share a path:", res.intersects, "| NE on a path:", terminal_ne_exists(inst))

# %% exhaustive up to 3 middle vertices, then random larger graphs
rep = bisp_search(seed=7, exhaustive_max=3, cost_samples=20, random_instances=500)
print(rep.as_dict())
