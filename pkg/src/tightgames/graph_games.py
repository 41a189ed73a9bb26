"""Positional win-lose games on digraphs (DGGS / MSDGGS).

Vertices are owned by Alice (``"A"``), Bob (``"B"``) or are terminal
(``"T"``). Players use stationary strategies: one out-edge per owned vertex.
A play either stops in a terminal or runs into a lasso whose cycle lies in
a single strongly connected component; that component is the outcome.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .core_forms import GameForm
from .tightness import BudgetExceeded

__all__ = [
    "GameGraph",
    "SccDecomposition",
    "Play",
    "tarjan_scc",
    "scc_decompose",
    "strategies",
    "play",
    "outcome_of",
    "normal_form",
    "solve_win_lose",
    "merge_outcomes",
    "random_game_graph",
    "CYCLE",
]

CYCLE = "c"  # the merged cyclic outcome of a DGGS


@dataclass(frozen=True)
class GameGraph:
    """Digraph with vertex owners and an initial vertex.

    ``owners[v]`` is ``"A"``, ``"B"`` or ``"T"``. Parallel edges and loops are
    allowed; edges are addressed by their index in ``edges``.
    """

    owners: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    v0: int

    def __post_init__(self):
        object.__setattr__(self, "owners", tuple(self.owners))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        n = len(self.owners)
        for o in self.owners:
            if o not in ("A", "B", "T"):
                raise ValueError(f"unknown owner {o!r}")
        outdeg = [0] * n
        for u, w in self.edges:
            if not (0 <= u < n and 0 <= w < n):
                raise ValueError(f"edge ({u}, {w}) leaves the vertex set")
            outdeg[u] += 1
        for v, o in enumerate(self.owners):
            if o == "T" and outdeg[v]:
                raise ValueError(f"terminal {v} has outgoing edges")
            if o != "T" and not outdeg[v]:
                raise ValueError(f"non-terminal {v} has no outgoing edge")
        if not 0 <= self.v0 < n or self.owners[self.v0] == "T":
            raise ValueError("v0 must be a non-terminal vertex")

    @property
    def n(self) -> int:
        return len(self.owners)

    def out_edges(self, v: int) -> list[int]:
        return [i for i, (u, _) in enumerate(self.edges) if u == v]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, w in self.edges:
            adj[u].append(w)
        return adj

    def vertices_of(self, owner: str) -> list[int]:
        return [v for v, o in enumerate(self.owners) if o == owner]


def tarjan_scc(adj: Sequence[Sequence[int]]) -> list[list[int]]:
    """Iterative Tarjan. Components come out sinks-first (reverse topological)."""
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            succ = adj[v]
            while i < len(succ):
                w = succ[i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


@dataclass(frozen=True)
class SccDecomposition:
    component_of: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]  # in reverse topological order (sinks first)
    kind: tuple[str, ...]  # "terminal" | "transient" | "cyclic"
    condensation: tuple[frozenset[int], ...]  # successor components of each component

    def outcomes(self) -> list[int]:
        return [c for c, k in enumerate(self.kind) if k != "transient"]


def scc_decompose(graph: GameGraph) -> SccDecomposition:
    adj = graph.adjacency()
    comps = tarjan_scc(adj)
    comp_of = [0] * graph.n
    for c, vs in enumerate(comps):
        for v in vs:
            comp_of[v] = c
    kinds = []
    succ = [set() for _ in comps]
    loops = {u for u, w in graph.edges if u == w}
    for c, vs in enumerate(comps):
        if len(vs) == 1 and graph.owners[vs[0]] == "T":
            kinds.append("terminal")
        elif len(vs) == 1 and vs[0] not in loops:
            kinds.append("transient")
        else:
            kinds.append("cyclic")
    for u, w in graph.edges:
        if comp_of[u] != comp_of[w]:
            succ[comp_of[u]].add(comp_of[w])
    return SccDecomposition(
        tuple(comp_of), tuple(tuple(vs) for vs in comps), tuple(kinds), tuple(frozenset(s) for s in succ)
    )


def strategies(graph: GameGraph, owner: str) -> list[tuple[int, ...]]:
    """All stationary strategies of ``owner`` as tuples of edge indices.

    Position ``k`` of a strategy is the chosen edge at the ``k``-th vertex of
    ``graph.vertices_of(owner)``.
    """
    return list(itertools.product(*(graph.out_edges(v) for v in graph.vertices_of(owner))))


@dataclass(frozen=True)
class Play:
    path: tuple[int, ...]  # vertices visited, starting at v0
    edges: tuple[int, ...]  # edge indices taken
    cycle_start: Optional[int]  # index in ``path`` where the repeated cycle begins

    @property
    def terminal(self) -> Optional[int]:
        return self.path[-1] if self.cycle_start is None else None

    @property
    def cycle_edges(self) -> tuple[int, ...]:
        if self.cycle_start is None:
            return ()
        return self.edges[self.cycle_start:]


def _choice_map(graph: GameGraph, x: Sequence[int], y: Sequence[int]) -> dict[int, int]:
    choice = {}
    for owner, strat in (("A", x), ("B", y)):
        vs = graph.vertices_of(owner)
        if len(strat) != len(vs):
            raise ValueError(f"strategy of {owner} must choose at {len(vs)} vertices")
        for v, e in zip(vs, strat):
            if graph.edges[e][0] != v:
                raise ValueError(f"edge {e} does not leave vertex {v}")
            choice[v] = e
    return choice


def walk(graph: GameGraph, choice: dict[int, int], start: int) -> Play:
    path = [start]
    edges: list[int] = []
    seen = {start: 0}
    v = start
    while graph.owners[v] != "T":
        e = choice[v]
        edges.append(e)
        v = graph.edges[e][1]
        if v in seen:
            return Play(tuple(path), tuple(edges), seen[v])
        seen[v] = len(path)
        path.append(v)
    return Play(tuple(path), tuple(edges), None)


def play(graph: GameGraph, x: Sequence[int], y: Sequence[int], start: Optional[int] = None) -> Play:
    return walk(graph, _choice_map(graph, x, y), graph.v0 if start is None else start)


def outcome_of(p: Play, dec: SccDecomposition, mode: str = "msdggs"):
    """Component id of the play's outcome, or :data:`CYCLE` for cyclic DGGS plays."""
    if p.cycle_start is None:
        return dec.component_of[p.path[-1]]
    if mode == "dggs":
        return CYCLE
    return dec.component_of[p.path[p.cycle_start]]


def normal_form(
    graph: GameGraph, mode: str = "msdggs", budget: int = 10**6
) -> tuple[GameForm, list]:
    """Normal form over stationary strategies.

    Returns the game form and the outcome labels: component ids for MSDGGS,
    terminal component ids plus :data:`CYCLE` for DGGS. Labels list only the
    outcomes that actually occur, so the form is surjective.
    """
    xa = strategies(graph, "A")
    yb = strategies(graph, "B")
    if len(xa) * len(yb) > budget:
        raise BudgetExceeded(f"{len(xa)} x {len(yb)} normal form exceeds budget {budget}")
    dec = scc_decompose(graph)
    raw = [[outcome_of(play(graph, x, y), dec, mode) for y in yb] for x in xa]
    seen = {o for row in raw for o in row}
    labels = sorted(o for o in seen if o != CYCLE) + ([CYCLE] if CYCLE in seen else [])
    ids = {o: i for i, o in enumerate(labels)}
    return GameForm([[ids[o] for o in row] for row in raw]), labels


def _msdggs_sides(dec: SccDecomposition, alice_outcomes) -> list[Optional[str]]:
    side = []
    alice_outcomes = set(alice_outcomes)
    for c, k in enumerate(dec.kind):
        if k == "transient":
            side.append(None)
        elif k == "terminal":
            side.append("A" if c in alice_outcomes else "B")
        else:
            side.append("A" if (c in alice_outcomes or CYCLE in alice_outcomes) else "B")
    return side


def solve_win_lose(graph: GameGraph, OA, OB, dec: Optional[SccDecomposition] = None) -> list[str]:
    """Winner (``"A"`` or ``"B"``) at every vertex.

    ``OA``/``OB`` partition the outcome set: non-transient component ids, and
    :data:`CYCLE` may stand for all cyclic components (DGGS). Components are
    handled sinks-first; inside a cyclic component the player who loses if
    the play cycles there wins exactly on her/his attractor to already
    evaluated winning vertices outside. Linear in ``|V| + |E|``.
    """
    if dec is None:
        dec = scc_decompose(graph)
    OA, OB = set(OA), set(OB)
    if OA & OB:
        raise ValueError("OA and OB overlap")
    cyclic = {c for c, k in enumerate(dec.kind) if k == "cyclic"}
    terminal = {c for c, k in enumerate(dec.kind) if k == "terminal"}
    covered = set()
    for s in (OA, OB):
        for o in s:
            if o == CYCLE:
                covered |= cyclic
            elif o in cyclic or o in terminal:
                covered.add(o)
            else:
                raise ValueError(f"{o!r} is not an outcome of this graph")
    if CYCLE in OA and (OB & cyclic) or CYCLE in OB and (OA & cyclic):
        raise ValueError("cyclic outcome assigned to both players")
    if covered != cyclic | terminal:
        raise ValueError("OA and OB do not cover all outcomes")

    side = _msdggs_sides(dec, OA)
    win: list[Optional[str]] = [None] * graph.n
    out: list[list[int]] = [[] for _ in range(graph.n)]
    inc: list[list[int]] = [[] for _ in range(graph.n)]
    for u, w in graph.edges:
        out[u].append(w)
        inc[w].append(u)

    for c, vs in enumerate(dec.members):
        kind = dec.kind[c]
        if kind == "terminal":
            win[vs[0]] = side[c]
            continue
        if kind == "transient":
            v = vs[0]
            me = graph.owners[v]
            win[v] = me if any(win[w] == me for w in out[v]) else ("B" if me == "A" else "A")
            continue
        cycler = side[c]
        other = "B" if cycler == "A" else "A"
        inside = set(vs)
        # counters: edges that do not yet lead into the opponent's winning region
        count = {}
        queue = deque()
        attr = set()
        for v in vs:
            if graph.owners[v] == other:
                if any(w not in inside and win[w] == other for w in out[v]):
                    attr.add(v)
                    queue.append(v)
            else:
                k = sum(1 for w in out[v] if not (w not in inside and win[w] == other))
                count[v] = k
                if k == 0:
                    attr.add(v)
                    queue.append(v)
        while queue:
            w = queue.popleft()
            for u in inc[w]:
                if u not in inside or u in attr:
                    continue
                if graph.owners[u] == other:
                    attr.add(u)
                    queue.append(u)
                else:
                    count[u] -= 1
                    if count[u] == 0:
                        attr.add(u)
                        queue.append(u)
        for v in vs:
            win[v] = other if v in attr else cycler
    return win  # type: ignore[return-value]


def merge_outcomes(g: GameForm, partition: Sequence[Sequence[int]]) -> GameForm:
    """Relabel outcomes by block of ``partition`` (blocks cover ``O``)."""
    block = {}
    for b, members in enumerate(partition):
        for o in members:
            if o in block:
                raise ValueError(f"outcome {o} appears in two blocks")
            block[o] = b
    if set(block) != set(range(g.n_outcomes)):
        raise ValueError("partition must cover every outcome exactly once")
    used = sorted({block[int(o)] for o in g.table.ravel()})
    dense = {b: i for i, b in enumerate(used)}
    return GameForm([[dense[block[o]] for o in row] for row in g.to_lists()])


def strategy_space_size(graph: GameGraph, owner: str) -> int:
    return math.prod(len(graph.out_edges(v)) for v in graph.vertices_of(owner))


def random_game_graph(rng, max_vertices: int = 8, n_terminals: Optional[int] = None) -> GameGraph:
    """Random digraph with A/B positions and terminals; ``v0 = 0``."""
    n = int(rng.integers(2, max_vertices + 1))
    k = n_terminals if n_terminals is not None else int(rng.integers(0, min(3, n - 1) + 1))
    k = min(k, n - 1)
    owners = ["A" if rng.random() < 0.5 else "B" for _ in range(n - k)] + ["T"] * k
    p = float(rng.uniform(0.15, 0.5))
    edges = []
    for u in range(n - k):
        outs = [w for w in range(n) if rng.random() < p]
        if not outs:
            outs = [int(rng.integers(n))]
        edges += [(u, w) for w in outs]
    return GameGraph(owners, edges, 0)
