"""Walk through the nine built-in game forms g1..g9."""

# %%
from tightgames.textio import load_figure1
from tightgames.core_forms import basic_strategies, is_rectangular, is_simple
from tightgames.nf_solvers import nash_equilibria, saddle_point, solvability_report
from tightgames.tightness import build_hypergraphs, is_tight, tightness_witness, winlose_from_witness

forms = load_figure1()
for name, g in forms.items():
    print(name, g.to_lists(), "tight" if is_tight(g) else "not tight")

# %% supports as hypergraphs; tight means the two are dual
a, b = build_hypergraphs(forms["g1"])
print("row supports", [sorted(e) for e in a.edges])
print("col supports", [sorted(e) for e in b.edges])

# %% simple cells and basic strategies
for name, g in forms.items():
    bad = [(x, y) for x in range(g.n_rows) for y in range(g.n_cols) if not is_simple(g, x, y)]
    rows, cols = basic_strategies(g)
    print(f"{name}: non-simple {bad}, basic rows {sorted(rows)}, basic cols {sorted(cols)}, "
          f"rectangular {is_rectangular(g)}")

# %% a non-tight form and the win-lose game it hides
g7 = forms["g7"]
w = tightness_witness(g7)
r = winlose_from_witness(g7, w)
sp = saddle_point(g7, r)
print("witness", w, "rewards", r, "maxmin", sp.maxmin, "minmax", sp.minmax)

# %% the four solvability notions agree
for name, g in forms.items():
    rep = solvability_report(g)
    print(name, rep.tight, rep.nash_solvable, rep.zero_sum_solvable, rep.win_lose_solvable)

# %%
print(nash_equilibria(forms["g1"], (2, 1, 0), (0, 1, 2)))
