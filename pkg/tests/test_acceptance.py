"""Acceptance criteria, one test each, at the stated scale and tolerance.

Every test prints a single ``PASS``/``FAIL criterion N: ...`` line.
"""

import json
import shutil
import subprocess
import sys
import time

import pytest

from tightgames import certificates as C
from tightgames.core_forms import basic_strategies, is_simple
from tightgames.sp_games import enumerate_bipartite_instances
from tightgames.suite import PRESETS, theorem_suite
from tightgames.textio import load_figure1, parse_rational
from tightgames.tightness import build_hypergraphs, is_dual, is_tight
from tightgames.vform import complete_bipartite, mean_payoff_vform

SEED = 42
DESK = PRESETS["desk"]


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail

    return emit


def run(*names):
    t = time.perf_counter()
    rep = theorem_suite("desk", SEED, only=list(names))
    return rep["properties"], time.perf_counter() - t


def test_criterion_1_figure1(report):
    t = time.perf_counter()
    forms = load_figure1()
    verdicts = {}
    for name, g in forms.items():
        a, b = build_hypergraphs(g)
        vs = {is_tight(g, m) for m in ("dual", "j", "jjA", "jjB")} | {is_dual(a, b, "enumerate")}
        verdicts[name] = vs.pop() if len(vs) == 1 else None

    def non_simple(g):
        return {(x, y) for x in range(g.n_rows) for y in range(g.n_cols) if not is_simple(g, x, y)}

    quoted = {
        "g1": set(),
        "g2": set(),
        "g8": set(),
        "g9": set(),
        "g7": {(0, 0), (0, 1), (1, 0), (1, 1)},
        "g3": {(0, 0), (1, 1), (2, 2)},
        "g4": {(1, 1)},
        "g6": {(x, y) for x in range(2) for y in range(2) if forms["g6"].to_lists()[x][y] == 1},
        "g5": {(2, 2), (3, 3)},  # not quoted; computed and frozen
    }
    simple_ok = all(non_simple(forms[n]) == want for n, want in quoted.items())
    basic_ok = basic_strategies(forms["g6"]) == ({0}, {0}) and all(
        basic_strategies(g) == (set(range(g.n_rows)), set(range(g.n_cols)))
        for n, g in forms.items()
        if n != "g6"
    )
    props, _ = run("figure1")
    elapsed = time.perf_counter() - t
    tight_ok = verdicts == {f"g{i}": i <= 6 for i in range(1, 10)}
    ok = tight_ok and simple_ok and basic_ok and props["figure1"]["violations"] == 0 and elapsed < 1
    report(1, ok, f"tightness {tight_ok}, simple {simple_ok}, basic {basic_ok}, {elapsed:.2f}s (< 1s)")


def test_criterion_2_four_way_equivalence(report):
    props, elapsed = run("four_way_exhaustive", "four_way_sampled_o4")
    ex, sm = props["four_way_exhaustive"], props["four_way_sampled_o4"]
    ok = ex["violations"] == 0 and sm["violations"] == 0 and sm["checked"] >= 10**4 and elapsed <= 300
    report(
        2,
        ok,
        f"{ex['checked']} exhaustive forms ({ex['tight']} tight), {sm['checked']} sampled |O|=4, "
        f"{ex['violations'] + sm['violations']} disagreements, {elapsed:.1f}s (<= 300s)",
    )


def test_criterion_3_graph_solver(report):
    props, elapsed = run("graph_solver")
    p = props["graph_solver"]
    graphs = p["checked"] // 2  # each graph is solved as MSDGGS and as DGGS
    ok = p["violations"] == 0 and graphs >= 200
    report(3, ok, f"{graphs} digraphs, {p['violations']} mismatches, {p['not_tight']} non-tight forms")


def test_criterion_4_theorem1(report):
    props, elapsed = run("theorem1")
    p = props["theorem1"]
    ok = p["violations"] == 0 and DESK["u_samples"] >= 1000
    report(
        4,
        ok,
        f"{p['checked']} v-forms, {p['v_tight']} v-tight x {DESK['u_samples']} u samples, "
        f"{p['checked'] - p['v_tight']} separations verified, {p['embed_mismatches']} embedding mismatches",
    )


def test_criterion_5_mean_payoff(report):
    props, _ = run("mean_payoff")
    p = props["mean_payoff"]
    found = p["ne_free_3x3"]
    reverified = False
    if found is not None:
        gv = mean_payoff_vform(complete_bipartite(3, 3))
        uA = [parse_rational(v) for v in found["uA"]]
        uB = [parse_rational(v) for v in found["uB"]]
        reverified = C.verify(C.ne_free_certificate(gv, uA, uB, "vform"))
    samples_ok = DESK["mp_samples"] >= 10**4 and all(a == 2 for a, _ in DESK["mp_arenas"])
    ok = p["violations"] == 0 and reverified and p["ne_free_2xb"] == 0 and samples_ok
    report(
        5,
        ok,
        f"{p['checked']} sampled digraphs (<= 5 vertices) v-tight, 3x3 certificate re-verified {reverified}, "
        f"2xb hits {p['ne_free_2xb']} over {DESK['mp_samples']} samples each",
    )


def test_criterion_6_theorem2(report):
    props, _ = run("theorem2")
    p = props["theorem2"]
    ok = p["violations"] == 0 and DESK["cost_pairs"] >= 1000
    report(
        6,
        ok,
        f"{p['checked']} v+-forms ({p['tight']} tight) x {DESK['cost_pairs']} cost pairs, "
        f"{p['violations']} mismatches",
    )


def test_criterion_7_asumability(report):
    props, _ = run("asumability")
    p = props["asumability"]
    ok = p["violations"] == 0
    report(7, ok, f"{p['pbr_certificates']} PBRs, {p['checked']} filter checks, {p['violations']} violations")


def test_criterion_8_bisp(report):
    props, elapsed = run("bisp_harness", "symmetric_sp")
    h, s = props["bisp_harness"], props["symmetric_sp"]
    n_exh = sum(1 for _ in enumerate_bipartite_instances(DESK["bisp_exhaustive"]))
    want_checks = n_exh * DESK["bisp_cost_samples"] + DESK["bisp_random"]
    ok = (
        h["violations"] == 0
        and h["checked"] == want_checks
        and DESK["bisp_cost_samples"] >= 100
        and DESK["bisp_random"] >= 10**4
        and s["checked"] >= 1000
        and s["ne_missing"] == 0
        and elapsed <= 600
    )
    report(
        8,
        ok,
        f"{n_exh} exhaustive x {DESK['bisp_cost_samples']} + {DESK['bisp_random']} random = {h['checked']} checks, "
        f"{h['violations']} counterexamples; symmetric NE {s['checked'] - s['ne_missing']}/{s['checked']}; "
        f"{elapsed:.1f}s (<= 600s)",
    )


def test_criterion_9_determinism(report):
    exe = shutil.which("tightgames")
    cmd = ([exe] if exe else [sys.executable, "-m", "tightgames.cli"]) + ["suite", "--seed", "42", "--json"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    same = a.stdout == b.stdout and len(a.stdout) > 0
    rep = json.loads(a.stdout)
    ok = same and a.returncode == b.returncode == 0 and rep["seed"] == 42 and rep["ok"]
    report(9, ok, f"byte-identical {same}, {len(a.stdout)} bytes, exit codes {a.returncode}/{b.returncode}")
