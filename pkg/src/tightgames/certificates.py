"""Self-contained, replayable certificates.

A certificate is a JSON-compatible dict::

    {"schema": "tightgames-cert/1", "kind": ..., "input": {...},
     "witness": {...}, "digest": sha256 of the canonical rest}

``verify`` parses the embedded input text and re-checks the witness with
its own small loops; it never calls the solvers that produced it. The
digest catches edits that would otherwise leave a still-valid certificate.
"""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction
from typing import Optional, Sequence

from . import textio
from .sp_games import (
    CYCLE,
    SpInstance,
    bellman_ford_path,
    bisp_check,
    perturbed_costs,
    player_strategies,
)

__all__ = [
    "SCHEMA",
    "KINDS",
    "make_certificate",
    "tightness_certificate",
    "separation_certificate",
    "pbr_certificate",
    "ne_free_certificate",
    "bisp_certificate",
    "verify",
    "dumps",
]

SCHEMA = "tightgames-cert/1"
KINDS = ("tightness-witness", "separation", "pbr", "ne-free", "bisp-counterexample")


def _fr(v) -> str:
    return textio.format_rational(v)


def _digest(cert: dict) -> str:
    body = {k: v for k, v in cert.items() if k != "digest"}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


def dumps(cert: dict) -> str:
    return json.dumps(cert, sort_keys=True, indent=2) + "\n"


def make_certificate(kind: str, inp: dict, witness: dict) -> dict:
    if kind not in KINDS:
        raise ValueError(f"unknown certificate kind {kind!r}")
    cert = {"schema": SCHEMA, "kind": kind, "input": inp, "witness": witness}
    cert["digest"] = _digest(cert)
    return cert


def tightness_certificate(g, witness) -> dict:
    """Response pair with disjoint images: the form is not tight."""
    return make_certificate(
        "tightness-witness",
        {"form": textio.serialize_form(g)},
        {"phi": list(witness.phi), "psi": list(witness.psi)},
    )


def separation_certificate(gv, cert) -> dict:
    return make_certificate(
        "separation",
        {"vform": textio.serialize_vform(gv)},
        {
            "phi": list(cert.phi),
            "psi": list(cert.psi),
            "u": [_fr(a) for a in cert.u],
            "margin": _fr(cert.margin),
        },
    )


def pbr_certificate(gpv, cert) -> dict:
    return make_certificate(
        "pbr",
        {"vplus": textio.serialize_vplus(gpv)},
        {
            "side": cert.side,
            "strategy": list(cert.strategy),
            "u": [_fr(a) for a in cert.u],
            "margin": _fr(cert.margin),
        },
    )


def ne_free_certificate(game, uA: Sequence, uB: Sequence, model: str) -> dict:
    """Payoffs with no pure NE.

    ``model`` is ``"vplus"`` (costs, minimised), ``"vform"`` (utilities,
    maximised) or ``"form"`` (rewards per outcome, maximised).
    """
    ser = {"vplus": textio.serialize_vplus, "vform": textio.serialize_vform, "form": textio.serialize_form}
    if model not in ser:
        raise ValueError(f"unknown model {model!r}")
    return make_certificate(
        "ne-free",
        {"model": model, "game": ser[model](game)},
        {"uA": [_fr(a) for a in uA], "uB": [_fr(a) for a in uB]},
    )


def _path_json(p):
    return CYCLE if p == CYCLE else list(p)


def bisp_certificate(inst: SpInstance) -> dict:
    """Instance whose Bi-SP path sets do not share an s-t path."""
    res = bisp_check(inst)
    key = lambda p: (p == CYCLE, p if p != CYCLE else ())  # noqa: E731
    return make_certificate(
        "bisp-counterexample",
        {"instance": textio.serialize_instance(inst)},
        {
            "SA": [_path_json(p) for p in sorted(res.SA, key=key)],
            "SB": [_path_json(p) for p in sorted(res.SB, key=key)],
        },
    )


# ---------------------------------------------------------------------------
# verification


def _rats(xs) -> list[Fraction]:
    return [textio.parse_rational(str(x)) for x in xs]


def _dot(u, w) -> Fraction:
    return sum((a * b for a, b in zip(u, w)), Fraction(0))


def _index_ok(seq, n_items, bound) -> bool:
    return (
        isinstance(seq, list)
        and len(seq) == n_items
        and all(isinstance(v, int) and not isinstance(v, bool) and 0 <= v < bound for v in seq)
    )


def _verify_tightness(inp, wit) -> bool:
    g = textio.parse_form(inp["form"]).to_lists()
    nx, ny = len(g), len(g[0])
    phi, psi = wit["phi"], wit["psi"]
    if not (_index_ok(phi, nx, ny) and _index_ok(psi, ny, nx)):
        return False
    a = {g[x][phi[x]] for x in range(nx)}
    b = {g[psi[y]][y] for y in range(ny)}
    return not (a & b)


def _verify_separation(inp, wit) -> bool:
    gv = textio.parse_vform(inp["vform"])
    t = gv.table
    nx, ny = len(t), len(t[0])
    phi, psi = wit["phi"], wit["psi"]
    u = _rats(wit["u"])
    margin = textio.parse_rational(wit["margin"])
    if not (_index_ok(phi, nx, ny) and _index_ok(psi, ny, nx)) or len(u) != gv.dim or margin <= 0:
        return False
    low = max(_dot(u, t[x][phi[x]]) for x in range(nx))
    high = min(_dot(u, t[psi[y]][y]) for y in range(ny))
    if low + margin > high:
        return False
    # the scalar game has no saddle point
    r = [[_dot(u, w) for w in row] for row in t]
    maxmin = max(min(row) for row in r)
    minmax = min(max(col) for col in zip(*r))
    return maxmin < minmax


def _vplus_cost(u, w):
    return math.inf if w is None else _dot(u, w)


def _verify_pbr(inp, wit) -> bool:
    gpv = textio.parse_vplus(inp["vplus"])
    t = gpv.table
    side, strat = wit["side"], wit["strategy"]
    u = _rats(wit["u"])
    margin = textio.parse_rational(wit["margin"])
    if side not in ("bob", "alice") or margin <= 0 or len(u) != gpv.dim or min(u) <= 0:
        return False
    lines = [list(r) for r in t] if side == "bob" else [list(c) for c in zip(*t)]
    if not _index_ok(strat, len(lines), len(lines[0])):
        return False
    for line, k in zip(lines, strat):
        chosen = line[k]
        finite = [w for w in line if w is not None]
        if chosen is None:
            if finite:
                return False
            continue
        c = _dot(u, chosen)
        if any(w != chosen and c + margin > _dot(u, w) for w in finite):
            return False
    return True


def _verify_ne_free(inp, wit) -> bool:
    model = inp["model"]
    uA, uB = _rats(wit["uA"]), _rats(wit["uB"])
    if model == "form":
        t = textio.parse_form(inp["game"]).to_lists()
        n = 1 + max(max(r) for r in t)
        if len(uA) != n or len(uB) != n:
            return False
        ra = [[uA[o] for o in r] for r in t]
        rb = [[uB[o] for o in r] for r in t]
        sign = 1
    elif model == "vform":
        gv = textio.parse_vform(inp["game"])
        if len(uA) != gv.dim or len(uB) != gv.dim:
            return False
        ra = [[_dot(uA, w) for w in r] for r in gv.table]
        rb = [[_dot(uB, w) for w in r] for r in gv.table]
        sign = 1
    elif model == "vplus":
        gpv = textio.parse_vplus(inp["game"])
        if len(uA) != gpv.dim or len(uB) != gpv.dim or min(uA + uB) <= 0:
            return False
        ra = [[_vplus_cost(uA, w) for w in r] for r in gpv.table]
        rb = [[_vplus_cost(uB, w) for w in r] for r in gpv.table]
        sign = -1  # costs: flip to maximisation
    else:
        return False
    nx, ny = len(ra), len(ra[0])
    for x in range(nx):
        for y in range(ny):
            a_ok = all(sign * ra[i][y] <= sign * ra[x][y] for i in range(nx))
            b_ok = all(sign * rb[x][j] <= sign * rb[x][y] for j in range(ny))
            if a_ok and b_ok:
                return False
    return True


def _verify_bisp(inp, wit) -> bool:
    inst = textio.parse_instance(inp["instance"])
    if inst.n_players != 2:
        return False
    uA, uB = perturbed_costs(inst)

    def responses(player, lengths):
        vs = inst.vertices_of(player)
        out = set()
        for strat in player_strategies(inst, player):
            res = bellman_ford_path(inst, lengths, dict(zip(vs, strat)))
            out.add(CYCLE if res is None else tuple(res[1]))
        return out

    def claimed(lst):
        return {CYCLE if p == CYCLE else tuple(p) for p in lst}

    SA, SB = responses(0, uB), responses(1, uA)
    if SA != claimed(wit["SA"]) or SB != claimed(wit["SB"]):
        return False
    return not (SA & SB - {CYCLE})


_VERIFIERS = {
    "tightness-witness": _verify_tightness,
    "separation": _verify_separation,
    "pbr": _verify_pbr,
    "ne-free": _verify_ne_free,
    "bisp-counterexample": _verify_bisp,
}


def verify(cert: dict) -> bool:
    """Re-check a certificate from its own contents only."""
    try:
        if not isinstance(cert, dict) or cert.get("schema") != SCHEMA:
            return False
        if cert.get("digest") != _digest(cert):
            return False
        fn = _VERIFIERS.get(cert.get("kind"))
        if fn is None:
            return False
        return bool(fn(cert["input"], cert["witness"]))
    except (KeyError, TypeError, ValueError, IndexError, AttributeError):
        return False


def load(text: str) -> Optional[dict]:
    return json.loads(text)
