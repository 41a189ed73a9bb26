"""Vector game forms (v-forms) and mean-payoff games.

A v-form assigns a rational m-vector to every situation. A utility vector
``u`` turns it into the zero-sum game ``r(x, y) = (u, g(x, y))`` where Alice
maximises. Tightness asks that, for every pair of response strategies, the
convex hulls of the two selected vector sets meet; it is decided with the
exact simplex in :mod:`tightgames.lp`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .core_forms import GameForm
from .graph_games import GameGraph, play, strategies
from .lp import linprog_exact
from .nf_solvers import SaddleResult, matrix_saddle
from .tightness import DEFAULT_BUDGET, BudgetExceeded, response_images

__all__ = [
    "VForm",
    "SeparationCertificate",
    "HullIntersection",
    "VTightResult",
    "embed",
    "hull_intersection",
    "separating_utility",
    "is_v_tight",
    "zero_sum_value",
    "nonsolvable_u",
    "add_terminal_loops",
    "mean_payoff_vform",
    "complete_bipartite",
    "MeanPayoffCertificate",
    "mean_payoff_ne",
    "search_ne_free_mean_payoff",
]

Vector = tuple[Fraction, ...]


def _vec(v) -> Vector:
    return tuple(Fraction(a) for a in v)


def dot(u: Sequence[Fraction], w: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, w)), Fraction(0))


class VForm:
    """``|X| x |Y|`` table of rational m-vectors."""

    __slots__ = ("table", "dim")

    def __init__(self, table: Sequence[Sequence[Sequence]]):
        rows = tuple(tuple(_vec(w) for w in row) for row in table)
        if not rows or not rows[0]:
            raise ValueError("v-form table must be non-empty")
        if len({len(r) for r in rows}) != 1:
            raise ValueError("v-form rows differ in length")
        dims = {len(w) for r in rows for w in r}
        if len(dims) != 1 or 0 in dims:
            raise ValueError("all vectors must share a positive dimension")
        self.table = rows
        self.dim = dims.pop()

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.table), len(self.table[0])

    def vectors(self) -> list[Vector]:
        """The distinct vectors ``W``, in order of first appearance."""
        seen: dict[Vector, None] = {}
        for row in self.table:
            for w in row:
                seen.setdefault(w, None)
        return list(seen)

    def scalarize(self, u: Sequence) -> list[list[Fraction]]:
        u = _vec(u)
        if len(u) != self.dim:
            raise ValueError("utility vector has the wrong dimension")
        return [[dot(u, w) for w in row] for row in self.table]

    def __eq__(self, other):
        return isinstance(other, VForm) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"VForm({[[list(map(str, w)) for w in r] for r in self.table]})"


def embed(g: GameForm) -> VForm:
    """Unit-vector encoding of a game form."""
    n = g.n_outcomes
    return VForm([[tuple(int(o == k) for k in range(n)) for o in row] for row in g.to_lists()])


@dataclass(frozen=True)
class HullIntersection:
    """Convex weights ``lam`` on ``P`` and ``mu`` on ``Q`` with equal combinations."""

    lam: tuple[Fraction, ...]
    mu: tuple[Fraction, ...]


def hull_intersection(P: Sequence[Vector], Q: Sequence[Vector]) -> Optional[HullIntersection]:
    """Common point of ``conv(P)`` and ``conv(Q)``, or ``None`` if they are disjoint."""
    m = len(P[0])
    p, q = len(P), len(Q)
    A_eq = [[1] * p + [0] * q, [0] * p + [1] * q]
    b_eq = [1, 1]
    for i in range(m):
        A_eq.append([P[k][i] for k in range(p)] + [-Q[k][i] for k in range(q)])
        b_eq.append(0)
    res = linprog_exact([0] * (p + q), A_eq=A_eq, b_eq=b_eq)
    if res.status != "optimal":
        return None
    return HullIntersection(res.x[:p], res.x[p:])


def separating_utility(P: Sequence[Vector], Q: Sequence[Vector]) -> Optional[tuple[Vector, Fraction]]:
    """``(u, alpha)`` with ``(u, p) <= alpha`` and ``(u, q) >= alpha + 1``.

    Exists exactly when the hulls are disjoint. Free variables are split into
    positive and negative parts.
    """
    m = len(P[0])
    A_ub, b_ub = [], []
    # columns: u+ (m), u- (m), a+, a-
    for w in P:
        A_ub.append(list(w) + [-v for v in w] + [-1, 1])
        b_ub.append(0)
    for w in Q:
        A_ub.append([-v for v in w] + list(w) + [1, -1])
        b_ub.append(-1)
    res = linprog_exact([0] * (2 * m + 2), A_ub=A_ub, b_ub=b_ub)
    if res.status != "optimal":
        return None
    x = res.x
    u = tuple(x[i] - x[m + i] for i in range(m))
    return u, x[2 * m] - x[2 * m + 1]


@dataclass(frozen=True)
class SeparationCertificate:
    """Responses ``phi`` (Bob), ``psi`` (Alice) and a utility separating their images.

    ``(u, g(x, phi(x))) + margin <= (u, g(psi(y), y))`` for all ``x``, ``y``.
    """

    phi: tuple[int, ...]
    psi: tuple[int, ...]
    u: Vector
    margin: Fraction

    def check(self, gv: VForm) -> bool:
        nx, ny = gv.shape
        if len(self.phi) != nx or len(self.psi) != ny or self.margin <= 0:
            return False
        if any(not 0 <= y < ny for y in self.phi) or any(not 0 <= x < nx for x in self.psi):
            return False
        if len(self.u) != gv.dim:
            return False
        low = max(dot(self.u, gv.table[x][y]) for x, y in enumerate(self.phi))
        high = min(dot(self.u, gv.table[x][y]) for y, x in enumerate(self.psi))
        return low + self.margin <= high


@dataclass(frozen=True)
class VTightResult:
    tight: bool
    certificate: Optional[SeparationCertificate] = None
    lp_calls: int = 0

    def __bool__(self):
        return self.tight


def _ids(gv: VForm):
    index = {w: i for i, w in enumerate(gv.vectors())}
    return [[index[w] for w in row] for row in gv.table], list(index)


def is_v_tight(gv: VForm, budget: int = DEFAULT_BUDGET) -> VTightResult:
    """Decide v-tightness, returning a separation certificate when it fails.

    Only inclusion-minimal response images need checking: enlarging a vector
    set can only enlarge its hull. Pairs that share a vector meet trivially.
    """
    nx, ny = gv.shape
    if ny**nx * nx**ny > budget:
        raise BudgetExceeded(f"{ny**nx} x {nx**ny} response pairs exceed budget {budget}")
    cells, vecs = _ids(gv)
    bob = response_images(cells)
    alice = response_images([list(c) for c in zip(*cells)])
    calls = 0
    for ma, phi in bob.items():
        P = [vecs[i] for i in range(len(vecs)) if ma >> i & 1]
        for mb, psi in alice.items():
            if ma & mb:
                continue
            Q = [vecs[i] for i in range(len(vecs)) if mb >> i & 1]
            calls += 1
            sep = separating_utility(P, Q)
            if sep is not None:
                u, _ = sep
                low = max(dot(u, p) for p in P)
                high = min(dot(u, q) for q in Q)
                # rescale so that the gap is exactly 1
                scale = 1 / (high - low)
                cert = SeparationCertificate(phi, psi, tuple(a * scale for a in u), Fraction(1))
                return VTightResult(False, cert, calls)
    return VTightResult(True, None, calls)


def zero_sum_value(gv: VForm, u: Sequence) -> SaddleResult:
    """Saddle point of ``(u, g(x, y))`` with Alice maximising."""
    return matrix_saddle(gv.scalarize(u))


def nonsolvable_u(gv: VForm, budget: int = DEFAULT_BUDGET) -> Optional[Vector]:
    res = is_v_tight(gv, budget)
    return None if res.tight else res.certificate.u


def add_terminal_loops(graph: GameGraph) -> GameGraph:
    """Give every terminal a loop (owned by Alice; it is her only move there)."""
    owners = tuple("A" if o == "T" else o for o in graph.owners)
    loops = tuple((v, v) for v, o in enumerate(graph.owners) if o == "T")
    return GameGraph(owners, graph.edges + loops, graph.v0)


def mean_payoff_vform(graph: GameGraph) -> VForm:
    """Cycle-weight v-form: each cell is ``1/k`` on the ``k`` edges of its play's cycle."""
    if "T" in graph.owners:
        graph = add_terminal_loops(graph)
    m = len(graph.edges)
    xs, ys = strategies(graph, "A"), strategies(graph, "B")
    table = []
    for x in xs:
        row = []
        for y in ys:
            cyc = play(graph, x, y).cycle_edges
            k = Fraction(1, len(cyc))
            w = [Fraction(0)] * m
            for e in cyc:
                w[e] = k
            row.append(tuple(w))
        table.append(row)
    return VForm(table)


def complete_bipartite(a: int, b: int) -> GameGraph:
    """Alice owns ``0..a-1``, Bob owns ``a..a+b-1``; all cross edges; ``v0 = 0``."""
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    edges += [(a + j, i) for j in range(b) for i in range(a)]
    return GameGraph(("A",) * a + ("B",) * b, edges, 0)


@dataclass(frozen=True)
class MeanPayoffCertificate:
    """Utility pair for which the mean-payoff game has no pure stationary NE."""

    a: int
    b: int
    uA: Vector
    uB: Vector


def mean_payoff_ne(gv: VForm, uA: Sequence, uB: Sequence) -> list[tuple[int, int]]:
    """Exact NE set of ``(gv, uA, uB)`` with both players maximising."""
    ra = gv.scalarize(uA)
    rb = gv.scalarize(uB)
    nx, ny = gv.shape
    col_best = [max(ra[x][y] for x in range(nx)) for y in range(ny)]
    row_best = [max(r) for r in rb]
    return [
        (x, y)
        for x in range(nx)
        for y in range(ny)
        if ra[x][y] == col_best[y] and rb[x][y] == row_best[x]
    ]


def _integer_weights(gv: VForm) -> tuple[np.ndarray, int]:
    den = 1
    for row in gv.table:
        for w in row:
            for a in w:
                den = math.lcm(den, a.denominator)
    arr = np.array(
        [[[int(a * den) for a in w] for w in row] for row in gv.table], dtype=np.int64
    )
    return arr, den


def _ne_count(W: np.ndarray, uA: np.ndarray, uB: np.ndarray) -> int:
    ra = W @ uA
    rb = W @ uB
    ok = (ra == ra.max(axis=0, keepdims=True)) & (rb == rb.max(axis=1, keepdims=True))
    return int(ok.sum())


def search_ne_free_mean_payoff(
    a: int,
    b: int,
    seed: int,
    samples: int = 10_000,
    climb_steps: int = 0,
    value_range: int = 9,
) -> Optional[MeanPayoffCertificate]:
    """Look for integer utilities with no NE on the complete bipartite ``a x b`` arena.

    Each sample draws ``uA``, ``uB`` uniformly from ``[-value_range,
    value_range]`` per edge; with ``climb_steps > 0`` a sample is then improved
    by single-coordinate moves that do not increase the NE count. The scan is
    exact integer arithmetic (cycle weights are scaled by their common
    denominator) and any hit is re-checked with rational arithmetic.
    """
    gv = mean_payoff_vform(complete_bipartite(a, b))
    W, _ = _integer_weights(gv)
    m = gv.dim
    rng = np.random.Generator(np.random.Philox(seed))
    for _ in range(samples):
        uA = rng.integers(-value_range, value_range + 1, m)
        uB = rng.integers(-value_range, value_range + 1, m)
        count = _ne_count(W, uA, uB)
        for _ in range(climb_steps):
            if count == 0:
                break
            target = uA if rng.random() < 0.5 else uB
            i = int(rng.integers(m))
            old = target[i]
            target[i] = rng.integers(-value_range, value_range + 1)
            new = _ne_count(W, uA, uB)
            if new <= count:
                count = new
            else:
                target[i] = old
        if count == 0:
            cert = MeanPayoffCertificate(a, b, _vec(uA.tolist()), _vec(uB.tolist()))
            if not mean_payoff_ne(gv, cert.uA, cert.uB):
                return cert
    return None
