"""Batch driver running every cross-module property at a chosen scale.

``theorem_suite`` returns a JSON-compatible report: per property the number
of checked items, the number of violations and a few counts or discovered
examples. No timings are recorded, so equal ``(budget, seed)`` give equal
bytes under :func:`report_json`.
"""

from __future__ import annotations

import copy
import itertools
import json
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np

from . import certificates as C
from .core_forms import (
    GameForm,
    all_forms,
    basic_strategies,
    is_rectangular,
    is_rectangular_boxes,
    is_simple,
    random_form,
    supports,
)
from .graph_games import (
    CYCLE,
    merge_outcomes,
    normal_form,
    random_game_graph,
    scc_decompose,
    solve_win_lose,
    strategy_space_size,
)
from .nf_solvers import (
    NEGuaranteeViolated,
    check_lex_ne,
    is_nash_equilibrium,
    lex_safe_ne_swapped,
    lex_safe_pair,
    nash_equilibria,
    order_values,
    saddle_point,
    solvability_report,
)
from .sp_games import (
    bellman_ford_path,
    bisp_check,
    bisp_equivalence_check,
    bisp_search,
    enumerate_bipartite_instances,
    find_sp_ne,
    random_bipartite_instance,
    random_costs,
    random_symmetric_instance,
    search_ne_free_terminal,
    sp_inner_form,
    sp_vplus_form,
    terminal_ne_exists,
)
from .textio import load_figure1
from .tightness import (
    BudgetExceeded,
    build_hypergraphs,
    is_dual,
    is_tight,
    tightness_witness,
)
from .vform import (
    VForm,
    embed,
    hull_intersection,
    is_v_tight,
    mean_payoff_vform,
    search_ne_free_mean_payoff,
    separating_utility,
    zero_sum_value,
)
from .vplus import (
    VPlusForm,
    asumability_filter,
    degeneracy,
    delete_degenerate,
    is_vplus_tight,
    ne_exists_batch,
    ne_set,
    pbr_list,
    random_vplus_form,
)

__all__ = ["PRESETS", "theorem_suite", "report_json", "FIGURE1_EXPECTED", "figure1_classification"]

REPORT_SCHEMA = "tightgames-suite/1"

PRESETS: dict[str, dict] = {
    "desk": {
        "sampled_o4": 10_000,
        "collapse_forms": 500,
        "lex_samples": 20,
        "graph_instances": 300,
        "vform_random": 80,
        "u_samples": 1000,
        "mp_graphs": 200,
        "mp_samples": 10_000,
        "mp_arenas": [[2, 2], [2, 3], [2, 4]],
        "vplus_random": 150,
        "vplus_injective": 150,
        "cost_pairs": 1000,
        "bisp_exhaustive": 4,
        "bisp_cost_samples": 100,
        "bisp_random": 10_000,
        "bridge_samples": 3,
        "bridge_random": 1000,
        "symmetric_trials": 1000,
        "terminal_samples": 2000,
        "equivalence_instances": 200,
        "enum_budget": 10**7,
    },
    "smoke": {
        "sampled_o4": 300,
        "collapse_forms": 60,
        "lex_samples": 3,
        "graph_instances": 40,
        "vform_random": 10,
        "u_samples": 50,
        "mp_graphs": 20,
        "mp_samples": 300,
        "mp_arenas": [[2, 2]],
        "vplus_random": 20,
        "vplus_injective": 20,
        "cost_pairs": 100,
        "bisp_exhaustive": 3,
        "bisp_cost_samples": 3,
        "bisp_random": 100,
        "bridge_samples": 1,
        "bridge_random": 30,
        "symmetric_trials": 60,
        "terminal_samples": 40,
        "equivalence_instances": 20,
        "enum_budget": 10**6,
    },
}

# Figure 1 classifications: non-simple cells, basic rows/cols (None = all), tight, rectangular
FIGURE1_EXPECTED = {
    "g1": ([], None, None, True, True),
    "g2": ([], None, None, True, True),
    "g3": ([(0, 0), (1, 1), (2, 2)], None, None, True, False),
    "g4": ([(1, 1)], None, None, True, False),
    "g5": ([(2, 2), (3, 3)], None, None, True, False),
    "g6": ([(1, 1)], [0], [0], True, False),
    "g7": ([(0, 0), (0, 1), (1, 0), (1, 1)], None, None, False, False),
    "g8": ([], None, None, False, True),
    "g9": ([], None, None, False, True),
}


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream])))


def _fr(v) -> str:
    return C._fr(v)


def figure1_classification(g: GameForm) -> tuple:
    nx, ny = g.shape
    non_simple = [(x, y) for x in range(nx) for y in range(ny) if not is_simple(g, x, y)]
    rows, cols = basic_strategies(g)
    rows = None if len(rows) == nx else sorted(rows)
    cols = None if len(cols) == ny else sorted(cols)
    return non_simple, rows, cols


# ---------------------------------------------------------------------------
# normal forms


def prop_figure1(rng, cfg) -> dict:
    bad = []
    for name, g in load_figure1().items():
        ns, rows, cols, tight, rect = FIGURE1_EXPECTED[name]
        verdicts = {m: is_tight(g, m) for m in ("dual", "j", "jjA", "jjB")}
        a, b = build_hypergraphs(g)
        verdicts["enumerate"] = is_dual(a, b, method="enumerate")
        if set(verdicts.values()) != {tight}:
            bad.append(f"{name}: tightness")
        if figure1_classification(g) != (ns, rows, cols):
            bad.append(f"{name}: simple/basic")
        if is_rectangular(g) != rect or is_rectangular_boxes(g) != rect:
            bad.append(f"{name}: rectangular")
    return {"checked": 9, "violations": len(bad), "failures": bad}


def _form_checks(g: GameForm) -> list[str]:
    """Problems found on one form: method disagreement, bad witness, inconsistent solvability."""
    out = []
    rs, cs = supports(g)
    t = g.to_lists()
    if any(t[x][y] not in rs[x] & cs[y] for x in range(g.n_rows) for y in range(g.n_cols)):
        out.append("support")
    if is_rectangular(g) != is_rectangular_boxes(g):
        out.append("rectangular")
    verdicts = {m: is_tight(g, m) for m in ("dual", "j", "jjA", "jjB")}
    a, b = build_hypergraphs(g)
    verdicts["enumerate"] = is_dual(a, b, method="enumerate")
    if len(set(verdicts.values())) != 1:
        out.append("tightness-methods")
    w = tightness_witness(g)
    if (w is None) != verdicts["dual"]:
        out.append("witness-existence")
    if w is not None and not C.verify(C.tightness_certificate(g, w)):
        out.append("witness-soundness")
    return out


def prop_four_way_exhaustive(rng, cfg) -> dict:
    n = tight = 0
    bad = 0
    for g in all_forms(3, 3, 3):
        n += 1
        problems = _form_checks(g)
        rep = solvability_report(g)
        tight += rep.tight
        if problems or not rep.consistent:
            bad += 1
    return {"checked": n, "violations": bad, "tight": tight}


def prop_four_way_sampled(rng, cfg) -> dict:
    n = tight = bad = 0
    while n < cfg["sampled_o4"]:
        nx, ny = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        if nx * ny < 4:
            continue
        g = random_form(rng, nx, ny, 4)
        n += 1
        rep = solvability_report(g, rng)
        tight += rep.tight
        if _form_checks(g) or not rep.consistent:
            bad += 1
    return {"checked": n, "violations": bad, "tight": tight}


def prop_ne_collapse(rng, cfg) -> dict:
    """Merging two adjacent values of a strict order keeps every NE an NE."""
    checked = bad = 0
    for _ in range(cfg["collapse_forms"]):
        nx, ny = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        k = int(rng.integers(1, min(4, nx * ny) + 1))
        g = random_form(rng, nx, ny, k)
        rA = order_values(rng.permutation(k).tolist())
        rB = order_values(rng.permutation(k).tolist())
        for x, y in nash_equilibria(g, rA, rB):
            for r in (rA, rB):
                if k < 2:
                    continue
                lvl = int(rng.integers(1, k))
                old = list(r)
                # values lvl and lvl+1 become equal
                r[:] = [lvl if v == lvl + 1 else v for v in r]
                checked += 1
                if not is_nash_equilibrium(g, rA, rB, x, y):
                    bad += 1
                r[:] = old
    return {"checked": checked, "violations": bad}


def _tight_corpus(limit_outcomes: int = 3) -> list[GameForm]:
    return [g for g in all_forms(3, 3, limit_outcomes) if g.n_outcomes >= 2 and is_tight(g)]


def prop_lex_safe(rng, cfg) -> dict:
    """Lexicographically safe NE on tight forms, the swapped variant, and the zero-sum pair."""
    corpus = _tight_corpus() + [g for g in load_figure1().values() if is_tight(g)]
    checked = bad = zs_bad = 0
    counterexample = None
    for g in corpus:
        k = g.n_outcomes
        for _ in range(cfg["lex_samples"]):
            rA = order_values(rng.permutation(k).tolist())
            rB = order_values(rng.permutation(k).tolist())
            checked += 1
            try:
                check_lex_ne(g, rA, rB)
                x, y = lex_safe_ne_swapped(g, rA, rB)
                if not is_nash_equilibrium(g, rA, rB, x, y):
                    raise NEGuaranteeViolated("swapped")
            except NEGuaranteeViolated:
                bad += 1
            x0, y0 = lex_safe_pair(g, rA, rB)
            if counterexample is None and not is_nash_equilibrium(g, rA, rB, x0, y0):
                counterexample = {"form": g.to_lists(), "rA": rA, "rB": rB, "pair": [x0, y0]}
            neg = [-v for v in rA]
            x0, y0 = lex_safe_pair(g, rA, neg)
            if not is_nash_equilibrium(g, rA, neg, x0, y0):
                zs_bad += 1
    return {
        "checked": checked,
        "violations": bad + zs_bad + (counterexample is None),
        "zero_sum_pair_failures": zs_bad,
        "lex_pair_counterexample": counterexample,
    }


# ---------------------------------------------------------------------------
# graphs


def prop_graph_solver(rng, cfg) -> dict:
    checked = bad = not_tight = skipped = 0
    for _ in range(cfg["graph_instances"]):
        graph = random_game_graph(rng, 8)
        if strategy_space_size(graph, "A") * strategy_space_size(graph, "B") > 4096:
            skipped += 1
            continue
        dec = scc_decompose(graph)
        for mode in ("msdggs", "dggs"):
            g, labels = normal_form(graph, mode)
            all_out = [c for c in dec.outcomes() if dec.kind[c] == "terminal"]
            if mode == "msdggs":
                all_out = dec.outcomes()
            elif any(k == "cyclic" for k in dec.kind):
                all_out = all_out + [CYCLE]
            OA = [o for o in all_out if rng.random() < 0.5]
            OB = [o for o in all_out if o not in OA]
            win = solve_win_lose(graph, OA, OB, dec)[graph.v0]
            r = [1 if lab in OA else -1 for lab in labels]
            sp = saddle_point(g, r)
            checked += 1
            if not sp.exists or (sp.maxmin == 1) != (win == "A"):
                bad += 1
            if not is_tight(g):
                not_tight += 1
    return {"checked": checked, "violations": bad + not_tight, "not_tight": not_tight, "skipped": skipped}


def _partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in _partitions(rest):
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1:]
        yield [[first]] + p


def prop_merge(rng, cfg) -> dict:
    checked = bad = 0
    example = None
    for g in all_forms(3, 3, 4):
        if g.n_outcomes < 3:
            continue
        tight = is_tight(g)
        if not tight and example is not None:
            continue
        for part in _partitions(list(range(g.n_outcomes))):
            if len(part) in (1, g.n_outcomes):
                continue
            merged = merge_outcomes(g, part)
            mt = is_tight(merged)
            if tight:
                checked += 1
                bad += not mt
            elif mt and example is None:
                example = {"form": g.to_lists(), "partition": part, "merged": merged.to_lists()}
                break
    return {"checked": checked, "violations": bad + (example is None), "merge_creates_tightness": example}


# ---------------------------------------------------------------------------
# v-forms


def _random_vform(rng) -> VForm:
    nx, ny = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    m = int(rng.integers(1, 4))
    pool = [tuple(Fraction(int(a)) for a in rng.integers(0, 3, m)) for _ in range(int(rng.integers(1, nx * ny + 1)))]
    return VForm([[pool[int(rng.integers(len(pool)))] for _ in range(ny)] for _ in range(nx)])


def prop_theorem1(rng, cfg) -> dict:
    forms = [embed(g) for g in load_figure1().values()]
    forms += [embed(random_form(rng, 3, 3, int(rng.integers(2, 5)))) for _ in range(cfg["vform_random"] // 2)]
    forms += [_random_vform(rng) for _ in range(cfg["vform_random"])]
    checked = bad = tight_n = 0
    for gv in forms:
        res = is_v_tight(gv, cfg["enum_budget"])
        checked += 1
        if res.tight:
            tight_n += 1
            for _ in range(cfg["u_samples"]):
                u = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-9, 10, gv.dim), rng.integers(1, 4, gv.dim))]
                if not zero_sum_value(gv, u).exists:
                    bad += 1
                    break
        else:
            sv = zero_sum_value(gv, res.certificate.u)
            if sv.exists or not C.verify(C.separation_certificate(gv, res.certificate)):
                bad += 1
    embed_bad = sum(
        is_v_tight(embed(g)).tight != is_tight(g) for g in all_forms(2, 3, 3)
    )
    return {"checked": checked, "violations": bad + embed_bad, "v_tight": tight_n, "embed_mismatches": embed_bad}


def prop_lp_kernel(rng, cfg) -> dict:
    checked = bad = 0
    for _ in range(cfg["vform_random"] * 3):
        m = int(rng.integers(1, 4))
        P = [tuple(Fraction(int(a)) for a in rng.integers(-3, 4, m)) for _ in range(int(rng.integers(1, 4)))]
        Q = [tuple(Fraction(int(a)) for a in rng.integers(-3, 4, m)) for _ in range(int(rng.integers(1, 4)))]
        hi = hull_intersection(P, Q)
        sep = separating_utility(P, Q)
        checked += 1
        if (hi is None) == (sep is None):
            bad += 1
            continue
        if hi is not None:
            lp = [sum((l * p[i] for l, p in zip(hi.lam, P)), Fraction(0)) for i in range(m)]
            lq = [sum((l * q[i] for l, q in zip(hi.mu, Q)), Fraction(0)) for i in range(m)]
            if lp != lq or sum(hi.lam) != 1 or sum(hi.mu) != 1 or min(hi.lam + hi.mu) < 0:
                bad += 1
        else:
            u, alpha = sep
            if any(C._dot(u, p) > alpha for p in P) or any(C._dot(u, q) < alpha + 1 for q in Q):
                bad += 1
    return {"checked": checked, "violations": bad}


def _is_simple_cycle(edges, support) -> bool:
    outs, ins = {}, {}
    for e in support:
        u, w = edges[e]
        outs[u] = outs.get(u, 0) + 1
        ins[w] = ins.get(w, 0) + 1
    if set(outs) != set(ins) or any(v != 1 for v in outs.values()) or any(v != 1 for v in ins.values()):
        return False
    nxt = {edges[e][0]: edges[e][1] for e in support}
    start = next(iter(nxt))
    v, steps = nxt[start], 1
    while v != start:
        v, steps = nxt[v], steps + 1
    return steps == len(support)


def prop_mean_payoff(rng, cfg) -> dict:
    from .vform import add_terminal_loops

    checked = bad = rejected = 0
    # oversize graphs are redrawn, so every counted graph is fully verified
    while checked < cfg["mp_graphs"]:
        graph = random_game_graph(rng, 5)
        full = add_terminal_loops(graph) if "T" in graph.owners else graph
        if strategy_space_size(full, "A") * strategy_space_size(full, "B") > 256:
            rejected += 1
            continue
        gv = mean_payoff_vform(graph)
        nx, ny = gv.shape
        if ny**nx * nx**ny > cfg["enum_budget"]:
            rejected += 1
            continue
        checked += 1
        for w in gv.vectors():
            supp = [e for e, a in enumerate(w) if a != 0]
            if min(w) < 0 or sum(w) != 1 or not _is_simple_cycle(full.edges, supp):
                bad += 1
                break
        if not is_v_tight(gv, cfg["enum_budget"]).tight:
            bad += 1
    cert = search_ne_free_mean_payoff(3, 3, seed=int(rng.integers(2**31)), samples=2000, climb_steps=300)
    found = None
    if cert is None:
        bad += 1
    else:
        from .vform import complete_bipartite

        gv = mean_payoff_vform(complete_bipartite(3, 3))
        c = C.ne_free_certificate(gv, cert.uA, cert.uB, "vform")
        bad += not C.verify(c)
        found = {"uA": [_fr(a) for a in cert.uA], "uB": [_fr(a) for a in cert.uB]}
    small_hits = 0
    for a, b in cfg["mp_arenas"]:
        small_hits += search_ne_free_mean_payoff(
            a, b, seed=int(rng.integers(2**31)), samples=cfg["mp_samples"]
        ) is not None
    return {
        "checked": checked,
        "violations": bad + small_hits,
        "rejected_oversize": rejected,
        "ne_free_3x3": found,
        "ne_free_2xb": small_hits,
    }


# ---------------------------------------------------------------------------
# v+-forms


def _injective_vplus(rng) -> VPlusForm:
    nx, ny = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    m = int(rng.integers(2, 5))
    used = set()
    table = []
    for _ in range(nx):
        row = []
        for _ in range(ny):
            if rng.random() < 0.15:
                row.append(None)
                continue
            while True:
                w = tuple(Fraction(int(a)) for a in rng.integers(0, 4, m))
                if max(w) > 0 and w not in used:
                    break
            used.add(w)
            row.append(w)
        table.append(row)
    return VPlusForm(table, m)


def _vplus_corpus(rng, cfg) -> list[VPlusForm]:
    out = [random_vplus_form(rng) for _ in range(cfg["vplus_random"])]
    out += [_injective_vplus(rng) for _ in range(cfg["vplus_injective"])]
    return out


def prop_theorem2(rng, cfg, corpus) -> dict:
    checked = bad = tight_n = 0
    for gpv in corpus:
        res = is_vplus_tight(gpv)
        checked += 1
        UA = rng.integers(1, 10, (cfg["cost_pairs"], gpv.dim))
        UB = rng.integers(1, 10, (cfg["cost_pairs"], gpv.dim))
        d = degeneracy(gpv)
        if res.tight:
            tight_n += 1
            nondeg = not (d.rows and d.cols)
            if not ne_exists_batch(gpv, UA, UB, non_degenerate=nondeg).all():
                bad += 1
        else:
            uA, uB = res.psi.u, res.phi.u
            if ne_set(gpv, uA, uB) or not C.verify(C.ne_free_certificate(gpv, uA, uB, "vplus")):
                bad += 1
        after = delete_degenerate(gpv)
        if after != gpv and is_vplus_tight(after).tight != res.tight:
            bad += 1
    return {"checked": checked, "violations": bad, "tight": tight_n}


def prop_asumability(rng, cfg, corpus) -> dict:
    checked = bad = certs = 0
    for gpv in corpus:
        for side in ("bob", "alice"):
            lines = [list(r) for r in gpv.table] if side == "bob" else [list(c) for c in zip(*gpv.table)]
            for cert in pbr_list(gpv, side):
                certs += 1
                if not cert.check(gpv) or not C.verify(C.pbr_certificate(gpv, cert)):
                    bad += 1
                for k in range(1, 4):
                    for sub in itertools.combinations(range(len(lines)), k):
                        phi1 = [cert.strategy[i] for i in sub]
                        for phi2 in itertools.product(*(range(len(lines[i])) for i in sub)):
                            try:
                                verdict = asumability_filter(gpv, side, sub, phi1, phi2)
                            except ValueError:
                                continue  # infinite or repeated vectors: filter not applicable
                            checked += 1
                            bad += verdict != "pass"
    return {"checked": checked, "violations": bad, "pbr_certificates": certs}


# ---------------------------------------------------------------------------
# shortest paths


def prop_bisp_harness(rng, cfg) -> dict:
    rep = bisp_search(
        int(rng.integers(2**31)),
        exhaustive_max=cfg["bisp_exhaustive"],
        cost_samples=cfg["bisp_cost_samples"],
        random_instances=cfg["bisp_random"],
    )
    out = rep.as_dict()
    out["checked"] = out.pop("checks")
    out["violations"] = len(rep.counterexamples)
    out["certificates"] = rep.counterexamples
    return out


def prop_bisp_bridge(rng, cfg) -> dict:
    """Dijkstra vs Bellman-Ford, weak rectangularity, strong => weak, and the SP v+-form NE bridge."""
    insts = []
    for base in enumerate_bipartite_instances(cfg["bisp_exhaustive"]):
        insts += [random_costs(base, rng) for _ in range(cfg["bridge_samples"])]
    made = 0
    while made < cfg["bridge_random"]:
        inst = random_bipartite_instance(rng, int(rng.integers(5, 7)))
        if inst is not None:
            insts.append(inst)
            made += 1
    checked = bad = weak_only = skipped = 0
    for inst in insts:
        res = bisp_check(inst)
        checked += 1
        if res != bisp_check(inst, oracle=bellman_ford_path):
            bad += 1
        if res.intersects and not res.weak_intersects:
            bad += 1
        weak_only += res.weak_only
        try:
            sp_vplus_form(inst, budget=5000)
        except BudgetExceeded:
            skipped += 1
            continue
        except ValueError:
            bad += 1
            continue
        if terminal_ne_exists(inst) != res.intersects:
            bad += 1
    return {"checked": checked, "violations": bad, "weak_only": weak_only, "bridge_skipped": skipped}


def prop_symmetric(rng, cfg) -> dict:
    checked = bad = inner_bad = 0
    while checked < cfg["symmetric_trials"]:
        n = 1 + checked % 3
        inst = random_symmetric_instance(rng, n, int(rng.integers(2, 6)))
        if inst is None:
            continue
        checked += 1
        if find_sp_ne(inst) is None:
            bad += 1
        if n == 2:
            _, labels = sp_inner_form(inst)
            if sum(1 for o in labels if o[0] == "scc") > 1:
                inner_bad += 1
    return {"checked": checked, "violations": bad + inner_bad, "ne_missing": bad, "inner_outcome_violations": inner_bad}


def prop_equivalence(rng, cfg) -> dict:
    insts = [random_costs(b, rng) for b in enumerate_bipartite_instances(cfg["bisp_exhaustive"])]
    while len(insts) < cfg["equivalence_instances"]:
        inst = random_bipartite_instance(rng, int(rng.integers(3, 6)))
        if inst is not None:
            insts.append(inst)
    checked = bad = with_inner = 0
    for inst in insts:
        try:
            r = bisp_equivalence_check(inst, rng)
        except BudgetExceeded:
            continue
        checked += 1
        with_inner += r["inner_outcomes"] > 0
        bad += r["ne_kept"] != r["ne_before"]
    return {"checked": checked, "violations": bad, "with_inner_outcomes": with_inner}


def prop_terminal(rng, cfg) -> dict:
    found = search_ne_free_terminal(int(rng.integers(2**31)), cfg["terminal_samples"])
    return {
        "checked": cfg["terminal_samples"],
        "violations": sum(1 for f in found if not f["C22"]),
        "ne_free_found": len(found),
        "ne_free_with_C": sum(1 for f in found if f["C"]),
    }


# ---------------------------------------------------------------------------
# certificates


def _tamper(cert: dict) -> dict:
    """Change one witness field."""
    bad = copy.deepcopy(cert)
    wit = bad["witness"]
    key = sorted(wit)[0]
    val = wit[key]
    if isinstance(val, list) and val:
        v0 = val[0]
        val[0] = v0 + 1 if isinstance(v0, int) else ("1" if v0 != "1" else "2")
        if isinstance(v0, list):
            val[0] = v0 + [0]
    elif isinstance(val, str):
        wit[key] = val + "0" if val[-1].isdigit() else val + "x"
    else:
        wit[key] = None
    return bad


def prop_certificates(rng, cfg) -> dict:
    certs = []
    for g in load_figure1().values():
        w = tightness_witness(g)
        if w is not None:
            certs.append(C.tightness_certificate(g, w))
            res = is_v_tight(embed(g))
            certs.append(C.separation_certificate(embed(g), res.certificate))
    for _ in range(20):
        gpv = random_vplus_form(rng)
        for cert in pbr_list(gpv, "bob")[:2]:
            certs.append(C.pbr_certificate(gpv, cert))
        res = is_vplus_tight(gpv)
        if not res.tight:
            certs.append(C.ne_free_certificate(gpv, res.psi.u, res.phi.u, "vplus"))
    accepted = sum(C.verify(c) for c in certs)
    rejected = sum(not C.verify(_tamper(c)) for c in certs)
    kinds = sorted({c["kind"] for c in certs})
    return {
        "checked": len(certs),
        "violations": (len(certs) - accepted) + (len(certs) - rejected),
        "kinds": kinds,
    }


PROPERTIES: list[tuple[str, Callable]] = [
    ("figure1", prop_figure1),
    ("four_way_exhaustive", prop_four_way_exhaustive),
    ("four_way_sampled_o4", prop_four_way_sampled),
    ("ne_collapse", prop_ne_collapse),
    ("lex_safe", prop_lex_safe),
    ("graph_solver", prop_graph_solver),
    ("merge_outcomes", prop_merge),
    ("theorem1", prop_theorem1),
    ("lp_kernel", prop_lp_kernel),
    ("mean_payoff", prop_mean_payoff),
    ("theorem2", prop_theorem2),
    ("asumability", prop_asumability),
    ("bisp_harness", prop_bisp_harness),
    ("bisp_bridge", prop_bisp_bridge),
    ("symmetric_sp", prop_symmetric),
    ("inner_merge_equivalence", prop_equivalence),
    ("terminal_catch22", prop_terminal),
    ("certificates", prop_certificates),
]


def theorem_suite(
    budget: Union[str, dict] = "desk", seed: int = 0, only: Optional[list[str]] = None
) -> dict:
    """Run the properties (all, or those named in ``only``) and collect a report."""
    cfg = dict(PRESETS[budget]) if isinstance(budget, str) else dict(PRESETS["desk"], **budget)
    props = {}
    corpus = None
    for i, (name, fn) in enumerate(PROPERTIES):
        if only is not None and name not in only:
            continue
        rng = _rng(seed, i)
        if name in ("theorem2", "asumability"):
            if corpus is None:
                corpus = _vplus_corpus(_rng(seed, 1000), cfg)
            props[name] = fn(rng, cfg, corpus)
        else:
            props[name] = fn(rng, cfg)
    return {
        "schema": REPORT_SCHEMA,
        "seed": seed,
        "budget": budget if isinstance(budget, str) else "custom",
        "ok": all(p["violations"] == 0 for p in props.values()),
        "properties": props,
    }


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
