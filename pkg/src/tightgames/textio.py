"""Plain-text formats for forms, graphs, v-forms, v+-forms and SP instances.

All parsers report errors as :class:`ParseError` with a 1-based line and
column. Structural problems of a syntactically fine input (a non-surjective
form, a terminal with out-edges) surface as :class:`InvariantError`.

Formats::

    form      "X Y O", then X lines of Y outcome indices (0-based)
    graph     "n m v0", n owner lines (A|B|T), m lines "from to"
    vform     "X Y m", then X*Y lines (row-major) of m rationals p/q
    vplus     as vform, but a cell line may be the single token INF
    instance  graph format with owners A|B|1..n|T (exactly one T = sink,
              v0 = source), then one "edge player cost" line per edge and
              player
    rewards   two lines of rationals (Alice, then Bob)
"""

from __future__ import annotations

from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

from .core_forms import GameForm, InvalidFormError
from .graph_games import GameGraph
from .sp_games import SpInstance
from .vform import VForm
from .vplus import VPlusForm

__all__ = [
    "ParseError",
    "InvariantError",
    "parse_rational",
    "format_rational",
    "parse_form",
    "serialize_form",
    "parse_graph",
    "serialize_graph",
    "parse_vform",
    "serialize_vform",
    "parse_vplus",
    "serialize_vplus",
    "parse_instance",
    "serialize_instance",
    "parse_vectors",
    "serialize_vectors",
    "load_figure1",
    "FIGURE1_NAMES",
]

FIGURE1_NAMES = tuple(f"g{i}" for i in range(1, 10))


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class InvariantError(ValueError):
    """Input parsed fine but violates a structural invariant."""


class _Tokens:
    """Non-empty lines split into (token, line, column) triples; ``#`` starts a comment."""

    def __init__(self, text: str):
        self.lines = []
        for i, raw in enumerate(text.splitlines(), 1):
            body = raw.split("#", 1)[0]
            toks = []
            col = 0
            for part in body.split():
                col = body.index(part, col)
                toks.append((part, i, col + 1))
                col += len(part)
            if toks:
                self.lines.append(toks)
        self.pos = 0
        self.last_line = len(text.splitlines()) or 1

    def next_line(self, what: str) -> list[tuple[str, int, int]]:
        if self.pos >= len(self.lines):
            raise ParseError(f"unexpected end of input, expected {what}", self.last_line + 1)
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def finish(self):
        if self.pos < len(self.lines):
            _, ln, col = self.lines[self.pos][0]
            raise ParseError("trailing content", ln, col)


def _expect_count(line, n: int, what: str):
    if len(line) > n:
        _, ln, col = line[n]
        raise ParseError(f"too many fields in {what}", ln, col)
    if len(line) < n:
        _, ln, col = line[-1]
        raise ParseError(f"expected {n} fields in {what}, got {len(line)}", ln, col + len(line[-1][0]))


def _int(tok, lo: Optional[int] = None) -> int:
    s, ln, col = tok
    try:
        v = int(s)
    except ValueError:
        raise ParseError(f"expected an integer, got {s!r}", ln, col) from None
    if lo is not None and v < lo:
        raise ParseError(f"expected an integer >= {lo}, got {v}", ln, col)
    return v


def parse_rational(s: str) -> Fraction:
    """``p``, ``p/q`` or a decimal literal; raises ValueError on a zero denominator."""
    if "/" in s:
        p, q = s.split("/", 1)
        if int(q) == 0:
            raise ValueError("zero denominator")
        return Fraction(int(p), int(q))
    return Fraction(s)


def _rat(tok) -> Fraction:
    s, ln, col = tok
    try:
        return parse_rational(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {s!r} ({exc})", ln, col) from None


def format_rational(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_form(text: str) -> GameForm:
    tk = _Tokens(text)
    head = tk.next_line("header 'X Y O'")
    _expect_count(head, 3, "header")
    nx, ny, no = (_int(t, 1) for t in head)
    rows = []
    for _ in range(nx):
        line = tk.next_line("a table row")
        _expect_count(line, ny, "table row")
        row = []
        for tok in line:
            v = _int(tok, 0)
            if v >= no:
                raise ParseError(f"outcome {v} out of range 0..{no - 1}", tok[1], tok[2])
            row.append(v)
        rows.append(row)
    tk.finish()
    try:
        g = GameForm(rows)
    except InvalidFormError as exc:
        raise InvariantError(str(exc)) from None
    if g.n_outcomes != no:
        raise InvariantError(f"form is not surjective: {g.n_outcomes} of {no} outcomes used")
    return g


def serialize_form(g: GameForm) -> str:
    lines = [f"{g.n_rows} {g.n_cols} {g.n_outcomes}"]
    lines += [" ".join(map(str, r)) for r in g.to_lists()]
    return "\n".join(lines) + "\n"


def _graph_body(tk: _Tokens, owner_ok):
    head = tk.next_line("header 'n m v0'")
    _expect_count(head, 3, "header")
    n, m, v0 = _int(head[0], 1), _int(head[1], 0), _int(head[2], 0)
    if v0 >= n:
        raise ParseError(f"v0 = {v0} out of range", head[2][1], head[2][2])
    owners = []
    for _ in range(n):
        line = tk.next_line("an owner line")
        _expect_count(line, 1, "owner line")
        s, ln, col = line[0]
        o = owner_ok(s)
        if o is None:
            raise ParseError(f"unknown owner {s!r}", ln, col)
        owners.append(o)
    edges = []
    for _ in range(m):
        line = tk.next_line("an edge line 'from to'")
        _expect_count(line, 2, "edge line")
        u, w = _int(line[0], 0), _int(line[1], 0)
        for tok, v in zip(line, (u, w)):
            if v >= n:
                raise ParseError(f"vertex {v} out of range", tok[1], tok[2])
        edges.append((u, w))
    return owners, edges, v0


def parse_graph(text: str) -> GameGraph:
    tk = _Tokens(text)
    owners, edges, v0 = _graph_body(tk, lambda s: s if s in ("A", "B", "T") else None)
    tk.finish()
    try:
        return GameGraph(owners, edges, v0)
    except ValueError as exc:
        raise InvariantError(str(exc)) from None


def serialize_graph(graph: GameGraph) -> str:
    lines = [f"{graph.n} {len(graph.edges)} {graph.v0}"]
    lines += list(graph.owners)
    lines += [f"{u} {w}" for u, w in graph.edges]
    return "\n".join(lines) + "\n"


def _vector_cells(tk: _Tokens, nx: int, ny: int, m: int, allow_inf: bool):
    table = []
    for _ in range(nx):
        row = []
        for _ in range(ny):
            line = tk.next_line(f"a vector of {m} rationals")
            if allow_inf and len(line) == 1 and line[0][0] == "INF":
                row.append(None)
                continue
            _expect_count(line, m, "vector")
            row.append(tuple(_rat(t) for t in line))
        table.append(row)
    return table


def _vform_header(tk: _Tokens):
    head = tk.next_line("header 'X Y m'")
    _expect_count(head, 3, "header")
    return tuple(_int(t, 1) for t in head)


def parse_vform(text: str) -> VForm:
    tk = _Tokens(text)
    nx, ny, m = _vform_header(tk)
    table = _vector_cells(tk, nx, ny, m, False)
    tk.finish()
    try:
        return VForm(table)
    except ValueError as exc:
        raise InvariantError(str(exc)) from None


def _vector_lines(table, dim: int) -> list[str]:
    out = [f"{len(table)} {len(table[0])} {dim}"]
    for row in table:
        for w in row:
            out.append("INF" if w is None else " ".join(format_rational(a) for a in w))
    return out


def serialize_vform(gv: VForm) -> str:
    return "\n".join(_vector_lines(gv.table, gv.dim)) + "\n"


def parse_vplus(text: str) -> VPlusForm:
    tk = _Tokens(text)
    nx, ny, m = _vform_header(tk)
    table = _vector_cells(tk, nx, ny, m, True)
    tk.finish()
    try:
        return VPlusForm(table, m)
    except ValueError as exc:
        raise InvariantError(str(exc)) from None


def serialize_vplus(gpv: VPlusForm) -> str:
    return "\n".join(_vector_lines(gpv.table, gpv.dim)) + "\n"


def _sp_owner(s: str):
    if s == "T":
        return "T"
    if s in ("A", "B"):
        return "AB".index(s)
    if s.isdigit() and int(s) >= 1:
        return int(s) - 1
    return None


def parse_instance(text: str) -> SpInstance:
    tk = _Tokens(text)
    owners, edges, s = _graph_body(tk, _sp_owner)
    sinks = [v for v, o in enumerate(owners) if o == "T"]
    if len(sinks) != 1:
        raise InvariantError(f"expected exactly one sink T, found {len(sinks)}")
    t = sinks[0]
    owners = [None if o == "T" else o for o in owners]
    costs: dict[tuple[int, int], Fraction] = {}
    first_tok = {}
    while tk.pos < len(tk.lines):
        line = tk.next_line("a cost line 'edge player cost'")
        _expect_count(line, 3, "cost line")
        e = _int(line[0], 0)
        if e >= len(edges):
            raise ParseError(f"edge {e} out of range", line[0][1], line[0][2])
        p = _sp_owner(line[1][0])
        if p is None or p == "T":
            raise ParseError(f"unknown player {line[1][0]!r}", line[1][1], line[1][2])
        if (e, p) in costs:
            raise ParseError(f"duplicate cost for edge {e}, player {line[1][0]}", line[0][1], 1)
        costs[(e, p)] = _rat(line[2])
        first_tok.setdefault(p, line[1])
    n_players = 1 + max([o for o in owners if o is not None] + [p for _, p in costs], default=1)
    n_players = max(n_players, 2)
    missing = [(e, p) for e in range(len(edges)) for p in range(n_players) if (e, p) not in costs]
    if missing:
        e, p = missing[0]
        raise InvariantError(f"missing cost for edge {e}, player {p + 1}")
    rows = [[costs[(e, p)] for e in range(len(edges))] for p in range(n_players)]
    try:
        inst = SpInstance(owners, edges, s, t, rows)
    except ValueError as exc:
        raise InvariantError(str(exc)) from None
    if any(c <= 0 for r in inst.costs for c in r):
        raise InvariantError("costs must be strictly positive")
    return inst


def serialize_instance(inst: SpInstance) -> str:
    def name(p):
        return "AB"[p] if inst.n_players == 2 else str(p + 1)

    lines = [f"{inst.n} {inst.m} {inst.s}"]
    lines += ["T" if o is None else name(o) for o in inst.owners]
    lines += [f"{u} {w}" for u, w in inst.edges]
    for e in range(inst.m):
        for p in range(inst.n_players):
            lines.append(f"{e} {name(p)} {format_rational(inst.costs[p][e])}")
    return "\n".join(lines) + "\n"


def parse_vectors(text: str, length: Optional[int] = None) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Two lines of rationals: Alice's vector, then Bob's."""
    tk = _Tokens(text)
    out = []
    for who in ("Alice", "Bob"):
        line = tk.next_line(f"{who}'s vector")
        if length is not None:
            _expect_count(line, length, f"{who}'s vector")
        out.append(tuple(_rat(t) for t in line))
    tk.finish()
    return out[0], out[1]


def serialize_vectors(a: Sequence, b: Sequence) -> str:
    return "\n".join(" ".join(format_rational(v) for v in r) for r in (a, b)) + "\n"


def load_figure1(name: Optional[str] = None):
    """One Figure-1 form by name (``"g1"`` .. ``"g9"``), or all of them as a dict."""
    base = resources.files("tightgames.data").joinpath("figure1")
    if name is not None:
        if name not in FIGURE1_NAMES:
            raise KeyError(name)
        return parse_form(base.joinpath(f"{name}.txt").read_text())
    return {n: parse_form(base.joinpath(f"{n}.txt").read_text()) for n in FIGURE1_NAMES}
