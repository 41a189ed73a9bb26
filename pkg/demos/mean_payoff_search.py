"""Mean-payoff v-forms: tightness on small arenas and an NE-free utility pair on 3x3."""

# %%
from tightgames.certificates import ne_free_certificate, verify
from tightgames.vform import complete_bipartite, is_v_tight, mean_payoff_ne, mean_payoff_vform, search_ne_free_mean_payoff

# %% each cell is the uniform distribution on the cycle of its play
gv = mean_payoff_vform(complete_bipartite(2, 2))
print(gv.shape, "edges:", gv.dim)
print("v-tight:", is_v_tight(gv).tight)

# %% 2 x b arenas: random search finds nothing
for b in (2, 3, 4):
    hit = search_ne_free_mean_payoff(2, b, seed=1, samples=2000)
    print(f"2x{b}:", "found" if hit else "none")

# %% 3 x 3: sampling plus a little hill climbing
cert = search_ne_free_mean_payoff(3, 3, seed=0, samples=2000, climb_steps=300)
print("uA", [str(v) for v in cert.uA])
print("uB", [str(v) for v in cert.uB])
gv = mean_payoff_vform(complete_bipartite(3, 3))
print("NE:", mean_payoff_ne(gv, cert.uA, cert.uB))
print("certificate verifies:", verify(ne_free_certificate(gv, cert.uA, cert.uB, "vform")))
