"""Command-line front end.

Exit codes: 0 ok, 1 property violated or counterexample found, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import certificates as C
from . import textio
from .core_forms import GameForm
from .graph_games import CYCLE, scc_decompose, solve_win_lose
from .nf_solvers import (
    NEGuaranteeViolated,
    lex_safe_ne,
    nash_equilibria,
    order_values,
    saddle_point,
)
from .sp_games import (
    bisp_check,
    bisp_search,
    find_sp_ne,
    random_symmetric_instance,
    search_ne_free_terminal,
)
from .suite import PRESETS, report_json, theorem_suite
from .tightness import BudgetExceeded, DEFAULT_BUDGET, is_tight, tightness_witness
from .vform import complete_bipartite, is_v_tight, mean_payoff_vform, search_ne_free_mean_payoff
from .vplus import is_vplus_tight, ne_set

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_form(spec: str) -> GameForm:
    if spec.startswith("fixture:"):
        try:
            return textio.load_figure1(spec.split(":", 1)[1])
        except KeyError:
            raise InputError(f"unknown fixture {spec!r}; use g1..g9") from None
    return textio.parse_form(_read(spec))


def _int_budget(args) -> int:
    if args.budget is None:
        return DEFAULT_BUDGET
    try:
        return int(args.budget)
    except ValueError:
        raise InputError(f"--budget must be an integer here, got {args.budget!r}") from None


def _random_spec(spec: str) -> Optional[int]:
    if spec.startswith("random:"):
        try:
            return int(spec.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad seed in {spec!r}") from None
    return None


def _fr(v) -> str:
    return textio.format_rational(v)


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(human.rstrip("\n") + "\n")


# ---------------------------------------------------------------------------


def cmd_tight(args) -> int:
    budget = _int_budget(args)
    targets = (
        [(n, f"fixture:{n}") for n in textio.FIGURE1_NAMES] if args.fixtures else [(args.form, args.form)]
    )
    if not args.fixtures and args.form is None:
        raise InputError("tight needs a form file (or --fixtures)")
    results, lines = [], []
    for name, spec in targets:
        g = _load_form(spec)
        tight = is_tight(g, args.method, budget)
        res = {"name": name, "tight": tight, "method": args.method}
        line = f"{name}: {'tight' if tight else 'not tight'} ({args.method})"
        if args.witness and not tight:
            w = tightness_witness(g, budget)
            res["witness"] = C.tightness_certificate(g, w)
            line += f"  phi={list(w.phi)} psi={list(w.psi)}"
        results.append(res)
        lines.append(line)
    payload = results[0] if len(results) == 1 and not args.fixtures else {"results": results}
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _rewards(args, n: int):
    seed = _random_spec(args.rewards)
    if seed is not None:
        rng = _rng(seed)
        if args.mode == "winlose":
            return tuple(int(v) for v in rng.choice((-1, 1), n)), tuple(int(v) for v in rng.choice((-1, 1), n))
        return order_values(rng.permutation(n).tolist()), order_values(rng.permutation(n).tolist())
    return textio.parse_vectors(_read(args.rewards), n)


def cmd_solve(args) -> int:
    g = _load_form(args.form)
    rA, rB = _rewards(args, g.n_outcomes)
    payload = {"mode": args.mode, "rA": [_fr(v) for v in rA], "rB": [_fr(v) for v in rB]}
    if args.mode == "nash":
        ne = nash_equilibria(g, rA, rB)
        payload["equilibria"] = [list(s) for s in ne]
        human = f"{len(ne)} NE: {ne}"
    elif args.mode in ("zerosum", "winlose"):
        r = rA if args.mode == "zerosum" else [1 if Fraction(v) > 0 else -1 for v in rA]
        sp = saddle_point(g, r)
        payload.update(
            saddle=list(sp.situation) if sp.exists else None, maxmin=_fr(sp.maxmin), minmax=_fr(sp.minmax)
        )
        human = f"saddle point {sp.situation} (maxmin {sp.maxmin}, minmax {sp.minmax})"
    else:
        try:
            x, y = lex_safe_ne(g, rA, rB)
        except NEGuaranteeViolated as exc:
            payload["error"] = str(exc)
            _emit(args, payload, f"lexicographically safe construction failed: {exc}")
            return EXIT_VIOLATION
        payload["equilibrium"] = [x, y]
        human = f"lexicographically safe NE ({x}, {y})"
    _emit(args, payload, human)
    return EXIT_OK


def cmd_graph_solve(args) -> int:
    graph = textio.parse_graph(_read(args.graph))
    dec = scc_decompose(graph)
    outcome_of_vertex = {}
    for c, vs in enumerate(dec.members):
        if dec.kind[c] != "transient":
            for v in vs:
                outcome_of_vertex[v] = c
    has_cycle = any(k == "cyclic" for k in dec.kind)
    if args.mode == "msdggs":
        outcomes = set(dec.outcomes())
    else:
        outcomes = {c for c in dec.outcomes() if dec.kind[c] == "terminal"} | ({CYCLE} if has_cycle else set())
    OA = set()
    for tok in filter(None, args.oa.split(",")):
        tok = tok.strip()
        if tok == CYCLE and args.mode == "dggs":
            OA.add(CYCLE)
            continue
        try:
            v = int(tok)
        except ValueError:
            raise InputError(f"--oa expects vertex ids or 'c', got {tok!r}") from None
        c = outcome_of_vertex.get(v)
        if c is None:
            raise InputError(f"vertex {v} lies in no outcome (transient or unknown)")
        if args.mode == "dggs" and dec.kind[c] == "cyclic":
            OA.add(CYCLE)
        else:
            OA.add(c)
    OB = outcomes - OA
    win = solve_win_lose(graph, OA, OB, dec)
    payload = {"mode": args.mode, "winner_at_v0": win[graph.v0], "winners": win}
    _emit(args, payload, f"winner at v0={graph.v0}: {win[graph.v0]}\nall vertices: {''.join(win)}")
    return EXIT_OK


def cmd_vtight(args) -> int:
    gv = textio.parse_vform(_read(args.vform))
    res = is_v_tight(gv, _int_budget(args))
    payload = {"tight": res.tight, "lp_calls": res.lp_calls}
    human = "v-tight" if res.tight else "not v-tight"
    if not res.tight:
        payload["certificate"] = C.separation_certificate(gv, res.certificate)
        human += f"; separating u = {[_fr(a) for a in res.certificate.u]}"
    _emit(args, payload, human)
    return EXIT_OK


def cmd_mpg(args) -> int:
    payload, lines = {}, []
    if args.graph:
        graph = textio.parse_graph(_read(args.graph))
        gv = mean_payoff_vform(graph)
        res = is_v_tight(gv, _int_budget(args))
        payload["v_tight"] = res.tight
        lines.append(f"mean-payoff v-form {gv.shape[0]}x{gv.shape[1]}, m={gv.dim}: "
                     + ("v-tight" if res.tight else "NOT v-tight"))
        if not res.tight:
            payload["certificate"] = C.separation_certificate(gv, res.certificate)
            _emit(args, payload, "\n".join(lines))
            return EXIT_VIOLATION
    if args.search_ne_free:
        a, b = args.search_ne_free
        cert = search_ne_free_mean_payoff(a, b, seed=args.seed, samples=args.samples, climb_steps=args.climb)
        if cert is None:
            payload["ne_free"] = None
            lines.append(f"no NE-free utilities found on the {a}x{b} arena")
        else:
            gv = mean_payoff_vform(complete_bipartite(a, b))
            payload["ne_free"] = C.ne_free_certificate(gv, cert.uA, cert.uB, "vform")
            lines.append(f"NE-free utilities on the {a}x{b} arena: uA={[_fr(v) for v in cert.uA]} "
                         f"uB={[_fr(v) for v in cert.uB]}")
    if not payload:
        raise InputError("mpg needs --graph and/or --search-ne-free A B")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_vplus_tight(args) -> int:
    gpv = textio.parse_vplus(_read(args.vplus))
    res = is_vplus_tight(gpv, _int_budget(args))
    payload = {"tight": res.tight}
    human = "v+-tight" if res.tight else "not v+-tight"
    if not res.tight:
        payload["bob_pbr"] = C.pbr_certificate(gpv, res.phi)
        payload["alice_pbr"] = C.pbr_certificate(gpv, res.psi)
        payload["ne_free"] = C.ne_free_certificate(gpv, res.psi.u, res.phi.u, "vplus")
        human += f"; NE-free costs uA={[_fr(v) for v in res.psi.u]} uB={[_fr(v) for v in res.phi.u]}"
    _emit(args, payload, human)
    return EXIT_OK


def cmd_vplus_ne(args) -> int:
    gpv = textio.parse_vplus(_read(args.vplus))
    seed = _random_spec(args.costs)
    if seed is not None:
        rng = _rng(seed)
        uA = [Fraction(int(v)) for v in rng.integers(1, 10, gpv.dim)]
        uB = [Fraction(int(v)) for v in rng.integers(1, 10, gpv.dim)]
    else:
        uA, uB = textio.parse_vectors(_read(args.costs), gpv.dim)
        if min(uA + uB) <= 0:
            raise InputError("costs must be strictly positive")
    ne = ne_set(gpv, uA, uB)
    payload = {"uA": [_fr(v) for v in uA], "uB": [_fr(v) for v in uB], "equilibria": [list(s) for s in ne]}
    _emit(args, payload, f"{len(ne)} NE: {ne}")
    return EXIT_OK


def _path_str(p) -> str:
    return CYCLE if p == CYCLE else "-".join(map(str, p))


def cmd_bisp(args) -> int:
    if args.bisp_cmd == "check":
        inst = textio.parse_instance(_read(args.instance))
        if inst.n_players != 2:
            raise InputError("bisp check needs a two-player instance")
        res = bisp_check(inst)
        ok = res.weak_intersects if args.weak else res.intersects
        payload = {
            "intersects": res.intersects,
            "weak_intersects": res.weak_intersects,
            "SA": sorted(_path_str(p) for p in res.SA),
            "SB": sorted(_path_str(p) for p in res.SB),
        }
        if not res.intersects:
            payload["certificate"] = C.bisp_certificate(inst)
        _emit(args, payload, f"SA={payload['SA']}\nSB={payload['SB']}\nintersect: {ok}")
        return EXIT_OK if ok else EXIT_VIOLATION
    if args.bisp_cmd == "verify":
        return cmd_verify(args)
    # search
    payload, lines, code = {}, [], EXIT_OK
    if args.symmetric:
        rng = _rng(args.seed)
        trials = missing = 0
        while trials < args.samples:
            inst = random_symmetric_instance(rng, 1 + trials % 3, int(rng.integers(2, 6)))
            if inst is None:
                continue
            trials += 1
            missing += find_sp_ne(inst) is None
        payload["symmetric"] = {"trials": trials, "ne_missing": missing}
        lines.append(f"symmetric: {trials} trials, {missing} without NE")
        code = max(code, EXIT_VIOLATION if missing else EXIT_OK)
    elif args.terminal:
        found = search_ne_free_terminal(args.seed, args.samples)
        bad = sum(1 for f in found if not f["C22"])
        payload["terminal"] = {"samples": args.samples, "ne_free": len(found), "violating_C22": bad}
        lines.append(f"terminal: {len(found)} NE-free games in {args.samples} samples, {bad} violate (C22)")
        code = max(code, EXIT_VIOLATION if bad else EXIT_OK)
    else:
        rep = bisp_search(args.seed, args.max_v, args.samples, args.random)
        payload["search"] = rep.as_dict()
        fails = len(rep.counterexamples)
        if args.weak:
            fails = sum(
                1 for c in rep.counterexamples
                if not (set(map(str, c["witness"]["SA"])) & set(map(str, c["witness"]["SB"])))
            )
        payload["counterexamples"] = rep.counterexamples
        lines.append(
            f"{rep.instances} instances, {rep.checks} checks, {rep.weak_only} weak-only, "
            f"{len(rep.counterexamples)} counterexamples"
        )
        code = EXIT_VIOLATION if fails else EXIT_OK
    _emit(args, payload, "\n".join(lines))
    return code


def cmd_verify(args) -> int:
    try:
        cert = json.loads(_read(args.cert))
    except json.JSONDecodeError as exc:
        raise InputError(f"certificate is not valid JSON: {exc}") from None
    found = _find_certificates(cert)
    if not found:
        found = [cert]  # let verify() reject it
    results = [(c.get("kind") if isinstance(c, dict) else None, C.verify(c)) for c in found]
    ok = all(v for _, v in results)
    payload = {"valid": ok, "certificates": [{"kind": k, "valid": v} for k, v in results]}
    human = "\n".join(f"{k}: {'valid' if v else 'INVALID'}" for k, v in results)
    _emit(args, payload, human)
    return EXIT_OK if ok else EXIT_VIOLATION


def _find_certificates(obj) -> list:
    """The object itself if it is a certificate, else every certificate nested in it."""
    if isinstance(obj, dict):
        if "schema" in obj:
            return [obj]
        return [c for v in obj.values() for c in _find_certificates(v)]
    if isinstance(obj, list):
        return [c for v in obj for c in _find_certificates(v)]
    return []


def cmd_suite(args) -> int:
    budget = args.budget or "desk"
    if budget not in PRESETS:
        raise InputError(f"--budget for suite must be one of {sorted(PRESETS)}")
    rep = theorem_suite(budget, args.seed)
    if args.json:
        sys.stdout.write(report_json(rep))
    else:
        for name, p in rep["properties"].items():
            status = "ok" if p["violations"] == 0 else "FAIL"
            sys.stdout.write(f"{status:4} {name}: {p['checked']} checked, {p['violations']} violations\n")
    return EXIT_OK if rep["ok"] else EXIT_VIOLATION


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--budget", default=None, help="enumeration cap; for 'suite' a preset name")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="tightgames", description="Tight game forms toolkit")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("tight", parents=[common], help="decide tightness of a game form")
    s.add_argument("form", nargs="?", help="form file or fixture:gN")
    s.add_argument("--method", choices=["dual", "j", "jjA", "jjB"], default="dual")
    s.add_argument("--witness", action="store_true", help="print a disjoint-image response pair")
    s.add_argument("--fixtures", action="store_true", help="run on the nine built-in Figure-1 forms")
    s.set_defaults(fn=cmd_tight)

    s = sub.add_parser("solve", parents=[common], help="equilibria of a game form with rewards")
    s.add_argument("form")
    s.add_argument("--rewards", required=True, help="rewards file or random:SEED")
    s.add_argument("--mode", choices=["nash", "zerosum", "winlose", "lex"], default="nash")
    s.set_defaults(fn=cmd_solve)

    s = sub.add_parser("graph-solve", parents=[common], help="win-lose positional game on a digraph")
    s.add_argument("graph")
    s.add_argument("--oa", required=True, help="comma-separated vertices whose outcomes Alice wins ('c' = cycles)")
    s.add_argument("--mode", choices=["dggs", "msdggs"], default="msdggs")
    s.set_defaults(fn=cmd_graph_solve)

    s = sub.add_parser("vtight", parents=[common], help="decide v-tightness of a vector form")
    s.add_argument("vform")
    s.set_defaults(fn=cmd_vtight)

    s = sub.add_parser("mpg", parents=[common], help="mean-payoff v-forms")
    s.add_argument("--graph")
    s.add_argument("--search-ne-free", nargs=2, type=int, metavar=("A", "B"))
    s.add_argument("--samples", type=int, default=2000)
    s.add_argument("--climb", type=int, default=300, help="hill-climbing steps per sample")
    s.set_defaults(fn=cmd_mpg)

    s = sub.add_parser("vplus-tight", parents=[common], help="decide tightness of a v+-form")
    s.add_argument("vplus")
    s.set_defaults(fn=cmd_vplus_tight)

    s = sub.add_parser("vplus-ne", parents=[common], help="NE of a v+-form under costs")
    s.add_argument("vplus")
    s.add_argument("--costs", required=True, help="costs file or random:SEED")
    s.set_defaults(fn=cmd_vplus_ne)

    s = sub.add_parser("bisp", help="bi-shortest-path checks and search")
    bsub = s.add_subparsers(dest="bisp_cmd", required=True)
    b = bsub.add_parser("check", parents=[common])
    b.add_argument("instance")
    b.add_argument("--weak", action="store_true", help="accept a shared cyclic outcome")
    b = bsub.add_parser("search", parents=[common])
    b.add_argument("--max-v", type=int, default=4, help="exhaustive size (non-terminal vertices)")
    b.add_argument("--samples", type=int, default=100, help="cost samples per exhaustive instance, or trials")
    b.add_argument("--random", type=int, default=10_000, help="random larger instances")
    b.add_argument("--symmetric", action="store_true", help="NE check on symmetric n-person instances")
    b.add_argument("--terminal", action="store_true", help="NE-free terminal game search")
    b.add_argument("--weak", action="store_true", help="count only weak-version failures")
    b = bsub.add_parser("verify", parents=[common])
    b.add_argument("cert")
    s.set_defaults(fn=cmd_bisp)

    s = sub.add_parser("verify", parents=[common], help="re-check a certificate")
    s.add_argument("cert")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("suite", parents=[common], help="run every cross-module property")
    s.set_defaults(fn=cmd_suite)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (InputError, textio.ParseError, textio.InvariantError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except BudgetExceeded as exc:
        sys.stderr.write(f"error: {exc} (raise --budget)\n")
        return EXIT_INPUT
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
