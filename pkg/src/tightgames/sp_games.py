"""Shortest-path games and the bi-shortest-path (Bi-SP) harness.

An instance is a digraph with source ``s`` and sink ``t``; every other
vertex belongs to one of ``n`` players and every edge carries a positive
cost per player. Players pick one out-edge per owned vertex. The play from
``s`` either reaches ``t`` (each player pays the sum of her edge costs) or
cycles (everyone pays ``+inf``).

For two players the Bi-SP check fixes each Alice mapping, computes Bob's
shortest path in what remains, does the same with roles swapped, and asks
whether the two path families share a path.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .core_forms import GameForm
from .graph_games import tarjan_scc
from .tightness import BudgetExceeded
from .vplus import VPlusForm, ne_set

__all__ = [
    "CYCLE",
    "NormalizationError",
    "SpInstance",
    "SpPlay",
    "normalize",
    "bipartitize",
    "is_bipartite",
    "is_symmetric",
    "perturbed_costs",
    "player_strategies",
    "play_sp",
    "dijkstra_path",
    "bellman_ford_path",
    "sp_game_form",
    "sp_vplus_form",
    "sp_inner_form",
    "merge_inner_outcomes",
    "BiSpResult",
    "bisp_check",
    "terminal_ne_exists",
    "find_sp_ne",
    "enumerate_bipartite_instances",
    "random_bipartite_instance",
    "random_symmetric_instance",
    "random_costs",
    "bisp_search",
    "bisp_equivalence_check",
    "TerminalGame",
    "terminal_mode",
    "terminal_play_outcome",
    "terminal_ne",
    "c_holds",
    "cprime_holds",
    "c22_holds",
    "cprime22_holds",
    "random_terminal_game",
    "search_ne_free_terminal",
]

CYCLE = "c"
INF = math.inf


class NormalizationError(ValueError):
    """The instance has no s-t path, so it cannot be normalised."""


@dataclass(frozen=True)
class SpInstance:
    """Shortest-path game instance.

    ``owners[v]`` is the controlling player (``0..n-1``) or ``None`` for the
    sink. ``costs[i][e]`` is player ``i``'s cost of edge ``e``. Edge indices
    are positions in ``edges``; parallel edges are allowed.
    """

    owners: tuple[Optional[int], ...]
    edges: tuple[tuple[int, int], ...]
    s: int
    t: int
    costs: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "owners", tuple(self.owners))
        object.__setattr__(self, "edges", tuple((int(u), int(w)) for u, w in self.edges))
        object.__setattr__(
            self, "costs", tuple(tuple(Fraction(c) for c in row) for row in self.costs)
        )
        n = len(self.owners)
        if not (0 <= self.s < n and 0 <= self.t < n) or self.s == self.t:
            raise ValueError("s and t must be distinct vertices")
        if self.owners[self.t] is not None:
            raise ValueError("the sink t has no owner")
        for v, o in enumerate(self.owners):
            if v != self.t and (o is None or not 0 <= o < self.n_players):
                raise ValueError(f"vertex {v} has invalid owner {o!r}")
        for u, w in self.edges:
            if not (0 <= u < n and 0 <= w < n):
                raise ValueError(f"edge ({u}, {w}) leaves the vertex set")
            if u == self.t:
                raise ValueError("the sink t must have no outgoing edge")
        for row in self.costs:
            if len(row) != len(self.edges):
                raise ValueError("one cost per edge and player required")

    @property
    def n(self) -> int:
        return len(self.owners)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def n_players(self) -> int:
        return len(self.costs)

    def out_edges(self, v: int) -> list[int]:
        return [i for i, (u, _) in enumerate(self.edges) if u == v]

    def vertices_of(self, player: int) -> list[int]:
        return [v for v, o in enumerate(self.owners) if o == player]

    def simple_paths(self) -> list[tuple[int, ...]]:
        """All simple s-t paths as edge-index tuples (exponential; small graphs only)."""
        out_e = [self.out_edges(v) for v in range(self.n)]
        paths = []
        stack = [(self.s, (), frozenset([self.s]))]
        while stack:
            v, path, seen = stack.pop()
            if v == self.t:
                paths.append(path)
                continue
            for e in reversed(out_e[v]):
                w = self.edges[e][1]
                if w not in seen:
                    stack.append((w, path + (e,), seen | {w}))
        return sorted(paths)

    def violations(self) -> list[str]:
        """Which of the standing assumptions fail: dead ends, no path, useless edges."""
        bad = []
        out_deg = [0] * self.n
        for u, _ in self.edges:
            out_deg[u] += 1
        if any(out_deg[v] == 0 for v in range(self.n) if v != self.t):
            bad.append("dead-end")
        paths = self.simple_paths()
        if not paths:
            bad.append("no-path")
        used = {e for p in paths for e in p}
        if len(used) != self.m:
            bad.append("useless-edge")
        if any(c <= 0 for row in self.costs for c in row):
            bad.append("non-positive-cost")
        return bad


def normalize(inst: SpInstance) -> SpInstance:
    """Merge dead ends into ``t`` and delete edges on no simple s-t path, to a fixed point.

    Raises :class:`NormalizationError` if no s-t path survives.
    """
    owners = list(inst.owners)
    edges = list(inst.edges)
    costs = [list(row) for row in inst.costs]
    alive = set(range(inst.n))
    s, t = inst.s, inst.t
    while True:
        cur = SpInstance(
            owners,
            edges,
            s,
            t,
            costs,
        )
        out_deg = {v: 0 for v in alive}
        for u, _ in edges:
            out_deg[u] += 1
        dead = [v for v in alive if v != t and out_deg[v] == 0]
        if dead:
            if s in dead:
                raise NormalizationError("the source has no way to the sink")
            dset = set(dead)
            edges = [(u, t if w in dset else w) for u, w in edges]
            alive -= dset
            continue
        paths = cur.simple_paths()
        if not paths:
            raise NormalizationError("no s-t path")
        used = sorted({e for p in paths for e in p})
        if len(used) == len(edges):
            break
        edges = [edges[e] for e in used]
        costs = [[row[e] for e in used] for row in costs]
    # compact the vertex numbering, keeping relative order
    order = sorted(alive)
    idx = {v: i for i, v in enumerate(order)}
    return SpInstance(
        [owners[v] if v != t else None for v in order],
        [(idx[u], idx[w]) for u, w in edges],
        idx[s],
        idx[t],
        costs,
    )


def is_bipartite(inst: SpInstance) -> bool:
    return all(
        w == inst.t or inst.owners[u] != inst.owners[w] for u, w in inst.edges
    )


def bipartitize(inst: SpInstance) -> SpInstance:
    """Subdivide same-owner edges with a vertex of the other player, halving costs."""
    if inst.n_players != 2:
        raise ValueError("bipartitize needs exactly two players")
    owners = list(inst.owners)
    edges: list[tuple[int, int]] = []
    costs: list[list[Fraction]] = [[], []]
    for e, (u, w) in enumerate(inst.edges):
        if w != inst.t and owners[u] == owners[w]:
            mid = len(owners)
            owners.append(1 - owners[u])
            edges += [(u, mid), (mid, w)]
            for i in range(2):
                half = inst.costs[i][e] / 2
                costs[i] += [half, half]
        else:
            edges.append((u, w))
            for i in range(2):
                costs[i].append(inst.costs[i][e])
    return SpInstance(owners, edges, inst.s, inst.t, costs)


def is_symmetric(inst: SpInstance) -> bool:
    """Every move between non-sink vertices is reversible."""
    es = {(u, w) for u, w in inst.edges if w != inst.t}
    return all((w, u) in es for u, w in es)


def perturbed_costs(inst: SpInstance) -> tuple[tuple[int, ...], ...]:
    """Integer costs ordering paths like the originals, with no ties.

    Costs are scaled to integers by their common denominator ``D`` and then
    ``c'(e) = c(e) * D * 2**(m+2) + 2**(m-e)``. The added terms of any path
    sum to less than ``2**(m+1)``, below the smallest scaled gap, and differ
    between different edge sets.
    """
    m = inst.m
    out = []
    for row in inst.costs:
        d = 1
        for c in row:
            d = math.lcm(d, c.denominator)
        out.append(tuple(int(c * d) * 2 ** (m + 2) + 2 ** (m - e) for e, c in enumerate(row)))
    return tuple(out)


def player_strategies(inst: SpInstance, player: int) -> list[tuple[int, ...]]:
    """Stationary strategies of ``player``: one out-edge per owned vertex."""
    return list(itertools.product(*(inst.out_edges(v) for v in inst.vertices_of(player))))


@dataclass(frozen=True)
class SpPlay:
    path: Optional[tuple[int, ...]]  # edge indices of the s-t path, None when cyclic
    costs: tuple  # per player; +inf for a cyclic play

    @property
    def outcome(self):
        return CYCLE if self.path is None else self.path


def _walk(inst: SpInstance, choice: dict[int, int]) -> Optional[tuple[int, ...]]:
    v = inst.s
    seen = {v}
    path = []
    while v != inst.t:
        e = choice[v]
        path.append(e)
        v = inst.edges[e][1]
        if v in seen:
            return None
        seen.add(v)
    return tuple(path)


def _profile_choice(inst: SpInstance, profile: Sequence[Sequence[int]]) -> dict[int, int]:
    choice = {}
    if len(profile) != inst.n_players:
        raise ValueError("one strategy per player required")
    for i, strat in enumerate(profile):
        vs = inst.vertices_of(i)
        if len(strat) != len(vs):
            raise ValueError(f"player {i} must choose at {len(vs)} vertices")
        for v, e in zip(vs, strat):
            if inst.edges[e][0] != v:
                raise ValueError(f"edge {e} does not leave vertex {v}")
            choice[v] = e
    return choice


def play_sp(inst: SpInstance, profile: Sequence[Sequence[int]]) -> SpPlay:
    """Outcome and additive costs of a strategy profile."""
    path = _walk(inst, _profile_choice(inst, profile))
    if path is None:
        return SpPlay(None, tuple(INF for _ in range(inst.n_players)))
    return SpPlay(path, tuple(sum((row[e] for e in path), Fraction(0)) for row in inst.costs))


def _allowed_edges(inst: SpInstance, fixed: dict[int, int]) -> list[list[int]]:
    return [[fixed[v]] if v in fixed else inst.out_edges(v) for v in range(inst.n)]


def dijkstra_path(inst: SpInstance, lengths: Sequence, fixed: dict[int, int]):
    """Shortest s-t path when vertices in ``fixed`` must use their given edge.

    Returns ``(length, edge tuple)`` or ``None`` when ``t`` is unreachable.
    Ties between equal distances go to the smaller vertex, then edge index.
    """
    allowed = _allowed_edges(inst, fixed)
    dist = {inst.s: 0}
    pred: dict[int, int] = {}
    done = set()
    heap = [(0, inst.s)]
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        if v == inst.t:
            break
        for e in allowed[v]:
            w = inst.edges[e][1]
            nd = d + lengths[e]
            if w not in dist or nd < dist[w] or (nd == dist[w] and w not in done and e < pred[w]):
                dist[w] = nd
                pred[w] = e
                heapq.heappush(heap, (nd, w))
    if inst.t not in done:
        return None
    path = []
    v = inst.t
    while v != inst.s:
        e = pred[v]
        path.append(e)
        v = inst.edges[e][0]
    return dist[inst.t], tuple(reversed(path))


def bellman_ford_path(inst: SpInstance, lengths: Sequence, fixed: dict[int, int]):
    """Same contract as :func:`dijkstra_path`, by edge relaxation rounds."""
    allowed = _allowed_edges(inst, fixed)
    usable = [e for v in range(inst.n) for e in allowed[v]]
    dist: dict[int, object] = {inst.s: 0}
    pred: dict[int, int] = {}
    for _ in range(inst.n - 1):
        changed = False
        for e in usable:
            u, w = inst.edges[e]
            if u in dist and (w not in dist or dist[u] + lengths[e] < dist[w]):
                dist[w] = dist[u] + lengths[e]
                pred[w] = e
                changed = True
        if not changed:
            break
    if inst.t not in dist:
        return None
    path = []
    v = inst.t
    while v != inst.s:
        e = pred[v]
        path.append(e)
        v = inst.edges[e][0]
    return dist[inst.t], tuple(reversed(path))


def _two_player(inst: SpInstance):
    if inst.n_players != 2:
        raise ValueError("this operation needs a two-player instance")


def sp_game_form(inst: SpInstance, budget: int = 10**6) -> tuple[GameForm, list]:
    """Normal form with outcomes ``paths + [CYCLE]`` (only those that occur)."""
    _two_player(inst)
    xs, ys = player_strategies(inst, 0), player_strategies(inst, 1)
    if len(xs) * len(ys) > budget:
        raise BudgetExceeded("SP normal form exceeds budget")
    raw = [[play_sp(inst, (x, y)).outcome for y in ys] for x in xs]
    seen = {o for r in raw for o in r}
    labels = sorted(o for o in seen if o != CYCLE) + ([CYCLE] if CYCLE in seen else [])
    ids = {o: i for i, o in enumerate(labels)}
    return GameForm([[ids[o] for o in r] for r in raw]), labels


def sp_vplus_form(inst: SpInstance, budget: int = 10**6) -> VPlusForm:
    """Paths replaced by their 0/1 edge-support vectors, cycles by ``WC``.

    Construction fails (ValueError) if the result is not weakly rectangular.
    """
    g, labels = sp_game_form(inst, budget)
    vec = []
    for o in labels:
        if o == CYCLE:
            vec.append(None)
        else:
            on = set(o)
            vec.append(tuple(int(e in on) for e in range(inst.m)))
    return VPlusForm([[vec[o] for o in r] for r in g.to_lists()], inst.m)


def sp_inner_form(inst: SpInstance, budget: int = 10**6) -> tuple[GameForm, list]:
    """Like :func:`sp_game_form` but cyclic plays keep their SCC as outcome.

    Inner outcomes are labelled ``("scc", smallest vertex of the component)``.
    """
    _two_player(inst)
    adj = [[] for _ in range(inst.n)]
    for u, w in inst.edges:
        adj[u].append(w)
    comp_key = {}
    for comp in tarjan_scc(adj):
        for v in comp:
            comp_key[v] = ("scc", min(comp))
    xs, ys = player_strategies(inst, 0), player_strategies(inst, 1)
    if len(xs) * len(ys) > budget:
        raise BudgetExceeded("SP normal form exceeds budget")
    raw = []
    for x in xs:
        row = []
        for y in ys:
            choice = _profile_choice(inst, (x, y))
            path = _walk(inst, choice)
            if path is None:
                # find a vertex on the cycle: walk 2n steps
                v = inst.s
                for _ in range(2 * inst.n):
                    v = inst.edges[choice[v]][1]
                row.append(comp_key[v])
            else:
                row.append(path)
        raw.append(row)
    seen = {o for r in raw for o in r}
    labels = sorted(o for o in seen if o[0] != "scc") + sorted(o for o in seen if o[0] == "scc")
    ids = {o: i for i, o in enumerate(labels)}
    return GameForm([[ids[o] for o in r] for r in raw]), labels


def merge_inner_outcomes(g: GameForm, labels: Sequence) -> tuple[GameForm, list]:
    """Collapse every inner (SCC) outcome into the single outcome :data:`CYCLE`."""
    new_labels = [o for o in labels if o[0] != "scc"]
    has_inner = len(new_labels) < len(labels)
    if has_inner:
        new_labels.append(CYCLE)
    ids = {o: i for i, o in enumerate(new_labels)}
    t = [[ids[CYCLE] if labels[o][0] == "scc" else ids[labels[o]] for o in r] for r in g.to_lists()]
    return GameForm(t), new_labels


@dataclass(frozen=True)
class BiSpResult:
    intersects: bool  # strong version: a common s-t path
    weak_intersects: bool  # weak version: c counts as a path
    SA: frozenset  # Bob's shortest paths against each Alice mapping
    SB: frozenset  # Alice's shortest paths against each Bob mapping

    @property
    def weak_only(self) -> bool:
        return self.weak_intersects and not self.intersects


def _responses(inst: SpInstance, fixed_player: int, lengths, oracle=dijkstra_path) -> set:
    out = set()
    vs = inst.vertices_of(fixed_player)
    for strat in player_strategies(inst, fixed_player):
        res = oracle(inst, lengths, dict(zip(vs, strat)))
        out.add(CYCLE if res is None else res[1])
    return out


def bisp_check(inst: SpInstance, perturb: bool = True, oracle=dijkstra_path) -> BiSpResult:
    """Compare Bob's best-response paths (to Alice mappings) with Alice's (to Bob's).

    Alice's costs are ``inst.costs[0]``, Bob's ``inst.costs[1]``. With
    ``perturb`` the costs are first made tie-free by :func:`perturbed_costs`.
    """
    _two_player(inst)
    if any(c <= 0 for row in inst.costs for c in row):
        raise ValueError("costs must be strictly positive")
    uA, uB = perturbed_costs(inst) if perturb else inst.costs
    SA = _responses(inst, 0, uB, oracle)
    SB = _responses(inst, 1, uA, oracle)
    common = SA & SB
    return BiSpResult(
        bool(common - {CYCLE}), bool(common), frozenset(SA), frozenset(SB)
    )


def terminal_ne_exists(inst: SpInstance, perturb: bool = True) -> bool:
    """A non-degenerate NE of the SP v+-form under the instance's (perturbed) costs."""
    gpv = sp_vplus_form(inst)
    uA, uB = perturbed_costs(inst) if perturb else inst.costs
    return any(gpv.table[x][y] is not None for x, y in ne_set(gpv, uA, uB))


def find_sp_ne(inst: SpInstance, budget: int = 10**6) -> Optional[dict[int, int]]:
    """First NE of the n-person SP game, by a plain profile scan.

    A profile is an NE when each player's cost equals her shortest-path
    distance with everybody else's choices frozen.
    """
    movers = [v for v in range(inst.n) if v != inst.t]
    options = [inst.out_edges(v) for v in movers]
    if math.prod(len(o) for o in options) > budget:
        raise BudgetExceeded("too many profiles")
    for picks in itertools.product(*options):
        choice = dict(zip(movers, picks))
        path = _walk(inst, choice)
        ok = True
        for i in range(inst.n_players):
            fixed = {v: e for v, e in choice.items() if inst.owners[v] != i}
            best = dijkstra_path(inst, inst.costs[i], fixed)
            if best is None:
                continue  # every deviation cycles as well
            if path is None or sum(inst.costs[i][e] for e in path) != best[0]:
                ok = False
                break
        if ok:
            return choice
    return None


# ---------------------------------------------------------------------------
# instance generators


def _canonical(owners, edges, s, t) -> tuple:
    """Smallest relabelling of the middle vertices that keeps owners, s and t."""
    middle = [v for v in range(len(owners)) if v not in (s, t)]
    best = None
    for perm in itertools.permutations(middle):
        if any(owners[a] != owners[b] for a, b in zip(middle, perm)):
            continue
        mp = dict(zip(middle, perm))
        mp[s], mp[t] = s, t
        key = tuple(sorted((mp[u], mp[w]) for u, w in edges))
        if best is None or key < best:
            best = key
    return best


def enumerate_bipartite_instances(max_nonterminal: int = 4) -> Iterator[SpInstance]:
    """All normalised bipartite two-player digraphs, up to isomorphism.

    Vertex 0 is ``s`` and the last vertex is ``t``; edges join opposite
    owners or lead to ``t``. Costs are all 1 here; callers draw their own.
    """
    seen = set()
    for k in range(2, max_nonterminal + 1):
        for owner_bits in itertools.product((0, 1), repeat=k - 1):
            owners = (0,) + owner_bits
            if len(set(owners)) < 2:
                continue
            t = k
            arcs = [(u, w) for u in range(k) for w in range(k) if owners[u] != owners[w]]
            arcs += [(u, t) for u in range(k)]
            for mask in range(1, 1 << len(arcs)):
                edges = [a for i, a in enumerate(arcs) if mask >> i & 1]
                if not any(w == t for _, w in edges):
                    continue
                raw = SpInstance(owners + (None,), edges, 0, t, [[1] * len(edges)] * 2)
                try:
                    inst = normalize(raw)
                except NormalizationError:
                    continue
                if len(set(o for o in inst.owners if o is not None)) < 2:
                    continue
                key = (inst.owners, inst.s, inst.t, _canonical(inst.owners, inst.edges, inst.s, inst.t))
                if key in seen:
                    continue
                seen.add(key)
                yield inst


def random_costs(inst: SpInstance, rng: np.random.Generator, high: int = 100) -> SpInstance:
    """Fresh positive rational costs ``k / d`` with ``k`` in ``1..high``, ``d`` in ``1..4``."""
    rows = []
    for _ in range(inst.n_players):
        num = rng.integers(1, high + 1, inst.m)
        den = rng.integers(1, 5, inst.m)
        rows.append([Fraction(int(a), int(b)) for a, b in zip(num, den)])
    return replace(inst, costs=tuple(tuple(r) for r in rows))


def random_bipartite_instance(
    rng: np.random.Generator, n_nonterminal: int, edge_prob: float = 0.4, t_prob: float = 0.4
) -> Optional[SpInstance]:
    """Random bipartite instance, normalised; ``None`` if normalisation fails."""
    k = n_nonterminal
    owners = [0] + [int(b) for b in rng.integers(0, 2, k - 1)]
    if len(set(owners)) < 2:
        owners[-1] = 1 - owners[0]
    t = k
    edges = [
        (u, w)
        for u in range(k)
        for w in range(k)
        if owners[u] != owners[w] and rng.random() < edge_prob
    ]
    edges += [(u, t) for u in range(k) if rng.random() < t_prob]
    raw = SpInstance(owners + [None], edges, 0, t, [[1] * len(edges)] * 2)
    try:
        inst = normalize(raw)
    except NormalizationError:
        return None
    if len(set(o for o in inst.owners if o is not None)) < 2:
        return None
    return random_costs(inst, rng)


def random_symmetric_instance(
    rng: np.random.Generator, n_players: int, n_nonterminal: int, edge_prob: float = 0.5, t_prob: float = 0.4
) -> Optional[SpInstance]:
    """Random symmetric digraph game; ``None`` if ``s`` cannot reach ``t``.

    Not normalised: pruning would delete moves back into ``s`` and break the
    symmetry.
    """
    k = n_nonterminal
    t = k
    owners = [int(o) for o in rng.integers(0, n_players, k)]
    pairs = [(u, w) for u in range(k) for w in range(u + 1, k) if rng.random() < edge_prob]
    edges = [e for u, w in pairs for e in ((u, w), (w, u))]
    edges += [(u, t) for u in range(k) if rng.random() < t_prob]
    outs = {u for u, _ in edges}
    for v in range(k):
        if v not in outs:
            edges.append((v, t))
    inst = SpInstance(owners + [None], edges, 0, t, [[1] * len(edges)] * n_players)
    if dijkstra_path(inst, [1] * inst.m, {}) is None:
        return None
    return random_costs(inst, rng)


@dataclass
class SearchReport:
    instances: int = 0
    checks: int = 0
    weak_only: int = 0
    counterexamples: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "instances": self.instances,
            "checks": self.checks,
            "weak_only": self.weak_only,
            "counterexamples": len(self.counterexamples),
        }


def bisp_search(
    seed: int,
    exhaustive_max: int = 4,
    cost_samples: int = 100,
    random_instances: int = 10_000,
    random_sizes: tuple[int, int] = (5, 7),
) -> SearchReport:
    """Bi-SP counterexample search over exhaustive tiny and random larger instances.

    Deterministic for a given seed. Every counterexample is re-verified with
    Bellman-Ford before it is reported.
    """
    from .certificates import bisp_certificate, verify

    rng = np.random.Generator(np.random.Philox(seed))
    report = SearchReport()

    def run(inst: SpInstance):
        report.checks += 1
        res = bisp_check(inst)
        if res.weak_only:
            report.weak_only += 1
        if not res.intersects:
            cert = bisp_certificate(inst)
            if verify(cert):
                report.counterexamples.append(cert)

    if exhaustive_max >= 2:
        for inst in enumerate_bipartite_instances(exhaustive_max):
            report.instances += 1
            for _ in range(cost_samples):
                run(random_costs(inst, rng))
    lo, hi = random_sizes
    made = 0
    while made < random_instances:
        inst = random_bipartite_instance(rng, int(rng.integers(lo, hi + 1)))
        if inst is None:
            continue
        made += 1
        report.instances += 1
        run(inst)
    return report


def bisp_equivalence_check(inst: SpInstance, rng: np.random.Generator) -> dict:
    """Check that NE survive merging inner outcomes when (C') holds.

    Inner outcomes get random per-player costs above every terminal path
    cost, so (C') holds; after merging, the single outcome ``c`` costs
    ``+inf``. Returns counts of NE before merging and how many survived.
    """
    g, labels = sp_inner_form(inst)
    uA, uB = inst.costs
    top = [max(sum(row[e] for e in p) for p in inst.simple_paths()) for row in (uA, uB)]

    def outcome_costs(labs, inner):
        ca, cb = [], []
        for o in labs:
            if o == CYCLE:
                ca.append(INF)
                cb.append(INF)
            elif o[0] == "scc":
                ca.append(inner[o][0])
                cb.append(inner[o][1])
            else:
                ca.append(sum(uA[e] for e in o))
                cb.append(sum(uB[e] for e in o))
        return ca, cb

    inner = {
        o: tuple(top[i] + Fraction(int(rng.integers(1, 50))) for i in range(2))
        for o in labels
        if o[0] == "scc"
    }
    ca, cb = outcome_costs(labels, inner)
    before = _min_ne(g, ca, cb)
    merged, mlabels = merge_inner_outcomes(g, labels)
    ma, mb = outcome_costs(mlabels, inner)
    after = set(_min_ne(merged, ma, mb))
    return {
        "inner_outcomes": len(inner),
        "ne_before": len(before),
        "ne_kept": sum(1 for s in before if s in after),
    }


def _min_ne(g: GameForm, ca, cb) -> list[tuple[int, int]]:
    t = g.to_lists()
    nx, ny = g.shape
    col_best = [min(ca[t[x][y]] for x in range(nx)) for y in range(ny)]
    row_best = [min(cb[o] for o in t[x]) for x in range(nx)]
    return [
        (x, y)
        for x in range(nx)
        for y in range(ny)
        if ca[t[x][y]] == col_best[y] and cb[t[x][y]] == row_best[x]
    ]


# ---------------------------------------------------------------------------
# terminal games


@dataclass(frozen=True)
class TerminalGame:
    """n-person game whose costs sit on terminals and inner outcomes.

    ``owners[v]`` is a player index or ``None`` for a terminal. Each player's
    ``terminal_costs[i][v]`` is defined for terminal vertices; cyclic plays
    end in an inner outcome, the strongly connected component holding the
    cycle (keyed by its smallest vertex), priced by ``inner_costs[i][key]``.
    Players minimise; costs may have any sign.
    """

    owners: tuple[Optional[int], ...]
    edges: tuple[tuple[int, int], ...]
    v0: int
    terminal_costs: tuple[dict, ...]
    inner_costs: tuple[dict, ...]

    @property
    def n_players(self) -> int:
        return len(self.terminal_costs)

    @property
    def terminals(self) -> list[int]:
        return [v for v, o in enumerate(self.owners) if o is None]

    def inner_keys(self) -> list[int]:
        adj = [[] for _ in self.owners]
        for u, w in self.edges:
            adj[u].append(w)
        loops = {u for u, w in self.edges if u == w}
        keys = []
        for comp in tarjan_scc(adj):
            if self.owners[comp[0]] is None:
                continue
            if len(comp) > 1 or comp[0] in loops:
                keys.append(min(comp))
        return sorted(keys)

    def out_edges(self, v: int) -> list[int]:
        return [i for i, (u, _) in enumerate(self.edges) if u == v]


def terminal_mode(inst: SpInstance, terminal_costs, inner_costs) -> TerminalGame:
    """Split terminal moves into separate terminals carrying ``terminal_costs``.

    ``terminal_costs[i][e]`` prices the terminal move ``e`` (an edge into
    ``t``) for player ``i``; local costs of all other moves are dropped.
    """
    owners = list(inst.owners)
    edges = []
    tcost: list[dict] = [{} for _ in range(inst.n_players)]
    for e, (u, w) in enumerate(inst.edges):
        if w == inst.t:
            leaf = len(owners)
            owners.append(None)
            edges.append((u, leaf))
            for i in range(inst.n_players):
                tcost[i][leaf] = Fraction(terminal_costs[i][e])
        else:
            edges.append((u, w))
    # the old sink is isolated now; keep it, it is simply never reached
    return TerminalGame(tuple(owners), tuple(edges), inst.s, tuple(tcost), tuple(inner_costs))


def _comp_keys(game: TerminalGame) -> dict[int, int]:
    adj = [[] for _ in game.owners]
    for u, w in game.edges:
        adj[u].append(w)
    key = {}
    for comp in tarjan_scc(adj):
        for v in comp:
            key[v] = min(comp)
    return key


def terminal_play_outcome(game: TerminalGame, choice: dict[int, int], keys=None):
    """``("t", v)`` for a terminal, ``("inner", key)`` for a cyclic play."""
    if keys is None:
        keys = _comp_keys(game)
    v = game.v0
    seen = set()
    while game.owners[v] is not None:
        if v in seen:
            return ("inner", keys[v])
        seen.add(v)
        v = game.edges[choice[v]][1]
    return ("t", v)


def _outcome_cost(game: TerminalGame, i: int, outcome):
    kind, v = outcome
    return game.terminal_costs[i][v] if kind == "t" else game.inner_costs[i][v]


def terminal_ne(game: TerminalGame, budget: int = 10**6) -> Optional[dict[int, int]]:
    """First pure stationary NE, by brute-force deviations; ``None`` if NE-free."""
    movers = [v for v, o in enumerate(game.owners) if o is not None]
    options = [game.out_edges(v) for v in movers]
    if math.prod(len(o) for o in options) > budget:
        raise BudgetExceeded("too many profiles")
    keys = _comp_keys(game)
    own = {i: [k for k, v in enumerate(movers) if game.owners[v] == i] for i in range(game.n_players)}
    for picks in itertools.product(*options):
        choice = dict(zip(movers, picks))
        out = terminal_play_outcome(game, choice, keys)
        stable = True
        for i in range(game.n_players):
            mine = own[i]
            cur = _outcome_cost(game, i, out)
            for alt in itertools.product(*(options[k] for k in mine)):
                dev = dict(choice)
                for k, e in zip(mine, alt):
                    dev[movers[k]] = e
                if _outcome_cost(game, i, terminal_play_outcome(game, dev, keys)) < cur:
                    stable = False
                    break
            if not stable:
                break
        if stable:
            return choice
    return None


def c_holds(terminal_costs: Sequence[Sequence], c_costs: Sequence) -> bool:
    """Every terminal strictly cheaper than ``c`` for every player."""
    return all(t < c for row, c in zip(terminal_costs, c_costs) for t in row)


def cprime_holds(terminal_costs: Sequence[Sequence], inner_costs: Sequence[Sequence]) -> bool:
    """Every terminal strictly cheaper than every inner outcome for every player."""
    return all(
        t < o for trow, orow in zip(terminal_costs, inner_costs) for t in trow for o in orow
    )


def c22_holds(terminal_costs: Sequence[Sequence], c_costs: Sequence) -> bool:
    """At least two players have at least two terminals costlier than ``c``."""
    return sum(1 for row, c in zip(terminal_costs, c_costs) if sum(t > c for t in row) >= 2) >= 2


def cprime22_holds(terminal_costs: Sequence[Sequence], inner_costs: Sequence[Sequence]) -> bool:
    """At least two players have at least two terminals costlier than some inner outcome."""
    count = 0
    for trow, orow in zip(terminal_costs, inner_costs):
        if orow and sum(t > min(orow) for t in trow) >= 2:
            count += 1
    return count >= 2


def random_terminal_game(
    rng: np.random.Generator, n_players: int, n_positions: int, n_terminals: int, merged: bool = True
) -> TerminalGame:
    """Random terminal game; with ``merged`` all inner outcomes share one cost (``c``)."""
    k = n_positions
    owners = [int(o) for o in rng.integers(0, n_players, k)] + [None] * n_terminals
    edges = []
    for u in range(k):
        targets = [w for w in range(k + n_terminals) if w != u and rng.random() < 0.4]
        if not targets:
            targets = [int(rng.integers(k, k + n_terminals))]
        edges += [(u, w) for w in targets]
    terms = list(range(k, k + n_terminals))
    tcost = tuple({v: Fraction(int(rng.integers(-9, 10))) for v in terms} for _ in range(n_players))
    game = TerminalGame(tuple(owners), tuple(edges), 0, tcost, tuple({} for _ in range(n_players)))
    keys = game.inner_keys()
    inner = []
    for _ in range(n_players):
        if merged:
            c = Fraction(int(rng.integers(-9, 10)))
            inner.append({key: c for key in keys})
        else:
            inner.append({key: Fraction(int(rng.integers(-9, 10))) for key in keys})
    return replace(game, inner_costs=tuple(inner))


def search_ne_free_terminal(
    seed: int, samples: int, n_players: int = 3, n_positions: int = 4, n_terminals: int = 3
) -> list[dict]:
    """Random NE-free terminal games with their (C)/(C22) verdicts."""
    rng = np.random.Generator(np.random.Philox(seed))
    found = []
    for _ in range(samples):
        game = random_terminal_game(rng, n_players, n_positions, n_terminals)
        if terminal_ne(game) is not None:
            continue
        trows = [[game.terminal_costs[i][v] for v in game.terminals] for i in range(n_players)]
        c = [next(iter(game.inner_costs[i].values()), INF) for i in range(n_players)]
        found.append({"game": game, "C": c_holds(trows, c), "C22": c22_holds(trows, c)})
    return found
