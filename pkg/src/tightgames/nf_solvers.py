"""Normal-form solvers for two-person game forms.

Both players maximise their rewards in the general case. In zero-sum games
Alice maximises ``r`` and Bob minimises it. The solvability predicates
enumerate strict preference orders (or +-1 partitions) and are vectorised
with numpy over the whole order space.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .core_forms import GameForm, basic_strategies, is_simple
from .tightness import is_tight

__all__ = [
    "NEGuaranteeViolated",
    "SaddleResult",
    "Solvability",
    "SolvabilityReport",
    "nash_equilibria",
    "is_nash_equilibrium",
    "saddle_point",
    "matrix_saddle",
    "order_values",
    "is_nash_solvable",
    "is_zero_sum_solvable",
    "is_win_lose_solvable",
    "solvability_report",
    "lex_safe_strategy",
    "lex_safe_ne",
    "lex_safe_ne_swapped",
    "lex_safe_pair",
]

EXHAUSTIVE_ORDER_PAIRS = 10**6


class NEGuaranteeViolated(RuntimeError):
    """The lexicographically safe construction did not produce an NE."""


def _frac(r: Sequence) -> list[Fraction]:
    return [Fraction(v) for v in r]


def is_nash_equilibrium(g: GameForm, rA: Sequence, rB: Sequence, x: int, y: int) -> bool:
    t = g.table
    a = rA[t[x, y]]
    b = rB[t[x, y]]
    return all(rA[t[i, y]] <= a for i in range(g.n_rows)) and all(
        rB[t[x, j]] <= b for j in range(g.n_cols)
    )


def nash_equilibria(g: GameForm, rA: Sequence, rB: Sequence) -> list[tuple[int, int]]:
    """All pure NE, both players maximising."""
    if len(rA) != g.n_outcomes or len(rB) != g.n_outcomes:
        raise ValueError("rewards must have one entry per outcome")
    rA, rB = _frac(rA), _frac(rB)
    t = g.to_lists()
    col_best = [max(rA[t[x][y]] for x in range(g.n_rows)) for y in range(g.n_cols)]
    row_best = [max(rB[o] for o in t[x]) for x in range(g.n_rows)]
    return [
        (x, y)
        for x in range(g.n_rows)
        for y in range(g.n_cols)
        if rA[t[x][y]] == col_best[y] and rB[t[x][y]] == row_best[x]
    ]


@dataclass(frozen=True)
class SaddleResult:
    situation: Optional[tuple[int, int]]
    maxmin: Fraction
    minmax: Fraction

    @property
    def exists(self) -> bool:
        return self.situation is not None


def matrix_saddle(matrix: Sequence[Sequence]) -> SaddleResult:
    """Saddle point of a payoff matrix; rows maximise, columns minimise."""
    m = [list(row) for row in matrix]
    row_min = [min(row) for row in m]
    col_max = [max(col) for col in zip(*m)]
    maxmin, minmax = max(row_min), min(col_max)
    situation = None
    if maxmin == minmax:
        situation = next(
            (x, y)
            for x, row in enumerate(m)
            for y, v in enumerate(row)
            if v == row_min[x] == col_max[y]
        )
    return SaddleResult(situation, maxmin, minmax)


def saddle_point(g: GameForm, r: Sequence) -> SaddleResult:
    """Saddle point of the zero-sum game where Alice maximises ``r``."""
    r = _frac(r)
    return matrix_saddle([[r[o] for o in row] for row in g.to_lists()])


def order_values(ranking: Sequence[int]) -> list[int]:
    """Integer rewards realising a strict order given best-first."""
    n = len(ranking)
    vals = [0] * n
    for pos, o in enumerate(ranking):
        vals[o] = n - pos
    return vals


@dataclass(frozen=True)
class Solvability:
    solvable: bool
    certificate: Optional[tuple] = None  # rewards witnessing non-solvability

    def __bool__(self):
        return self.solvable


def _best_masks(table: np.ndarray, values: np.ndarray):
    """Best-response masks for each reward vector in ``values`` (k x |O|)."""
    a = values[:, table]  # k x X x Y
    alice = a == a.max(axis=1, keepdims=True)
    bob = a == a.max(axis=2, keepdims=True)
    return alice.reshape(len(values), -1), bob.reshape(len(values), -1)


def _orders(n: int, rng: Optional[np.random.Generator], samples: int):
    if rng is None:
        return np.array([order_values(p) for p in itertools.permutations(range(n))], dtype=np.int64)
    return np.array(
        [order_values(rng.permutation(n).tolist()) for _ in range(samples)], dtype=np.int64
    )


def is_nash_solvable(
    g: GameForm,
    rng: Optional[np.random.Generator] = None,
    samples: int = 2000,
    exhaustive_limit: int = EXHAUSTIVE_ORDER_PAIRS,
) -> Solvability:
    """NE exists for every pair of strict preference orders.

    Exhaustive while ``|O|!^2 <= exhaustive_limit``; otherwise ``samples``
    random orders per player are drawn from ``rng`` (sampling evidence only).
    """
    n = g.n_outcomes
    if math.factorial(n) ** 2 <= exhaustive_limit:
        va = vb = _orders(n, None, 0)
    else:
        if rng is None:
            raise ValueError("order space too large for exhaustive check; pass rng")
        va = _orders(n, rng, samples)
        vb = _orders(n, rng, samples)
    alice, _ = _best_masks(g.table, va)
    _, bob = _best_masks(g.table, vb)
    hits = alice.astype(np.int32) @ bob.astype(np.int32).T
    bad = np.argwhere(hits == 0)
    if len(bad):
        i, j = bad[0]
        return Solvability(False, (tuple(int(v) for v in va[i]), tuple(int(v) for v in vb[j])))
    return Solvability(True)


def _saddle_free(table: np.ndarray, values: np.ndarray) -> Optional[int]:
    alice, _ = _best_masks(table, values)
    a = values[:, table]
    bob_min = (a == a.min(axis=2, keepdims=True)).reshape(len(values), -1)
    ok = (alice & bob_min).any(axis=1)
    bad = np.flatnonzero(~ok)
    return int(bad[0]) if len(bad) else None


def is_zero_sum_solvable(g: GameForm) -> Solvability:
    """Saddle point for every strict order of Alice (Bob's is the reverse)."""
    vals = _orders(g.n_outcomes, None, 0)
    bad = _saddle_free(g.table, vals)
    if bad is None:
        return Solvability(True)
    return Solvability(False, tuple(int(v) for v in vals[bad]))


def is_win_lose_solvable(g: GameForm) -> Solvability:
    """Saddle point for every +-1 reward."""
    n = g.n_outcomes
    vals = np.array(list(itertools.product((-1, 1), repeat=n)), dtype=np.int64)
    bad = _saddle_free(g.table, vals)
    if bad is None:
        return Solvability(True)
    return Solvability(False, tuple(int(v) for v in vals[bad]))


@dataclass
class SolvabilityReport:
    tight: bool
    nash_solvable: bool
    zero_sum_solvable: bool
    win_lose_solvable: bool
    counterexample: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return len({self.tight, self.nash_solvable, self.zero_sum_solvable, self.win_lose_solvable}) == 1


def solvability_report(g: GameForm, rng: Optional[np.random.Generator] = None) -> SolvabilityReport:
    ns = is_nash_solvable(g, rng)
    zs = is_zero_sum_solvable(g)
    wl = is_win_lose_solvable(g)
    cex = {}
    for name, res in (("nash", ns), ("zerosum", zs), ("winlose", wl)):
        if res.certificate is not None:
            cex[name] = res.certificate
    return SolvabilityReport(is_tight(g), ns.solvable, zs.solvable, wl.solvable, cex)


def _lex_key(values):
    # ascending values with a +inf sentinel: a proper prefix ranks higher
    return tuple(sorted(values)) + (math.inf,)


def lex_safe_strategy(g: GameForm, rA: Sequence) -> int:
    """Alice's lexicographically safe row.

    Rows are ranked by the ascending list of rewards over their support,
    compared from the worst entry up; a support whose list is a proper
    prefix of another's ranks higher. Ties go to the lowest row.
    """
    rA = _frac(rA)
    best, best_key = 0, None
    for x, row in enumerate(g.to_lists()):
        key = _lex_key(rA[o] for o in set(row))
        if best_key is None or key > best_key:
            best, best_key = x, key
    return best


def lex_safe_ne(g: GameForm, rA: Sequence, rB: Sequence) -> tuple[int, int]:
    """NE ``(x0, y*)`` built from Alice's lexicographically safe row.

    ``y*`` realises Bob's favourite outcome ``o*`` in the support of ``x0``,
    chosen among columns that contain no outcome Alice prefers to ``o*`` and
    no other outcome of ``g(x0)``; among those, a column of minimal support.
    On a tight form such a column exists and the result is a simple NE in
    basic strategies. Anything else raises :class:`NEGuaranteeViolated`.
    """
    rA, rB = _frac(rA), _frac(rB)
    x0 = lex_safe_strategy(g, rA)
    row = g.to_lists()[x0]
    support = set(row)
    o_star = max(sorted(support), key=lambda o: rB[o])
    bad = {o for o in range(g.n_outcomes) if rA[o] > rA[o_star]} | (support - {o_star})
    bad_mask = sum(1 << o for o in bad)
    cols = g.col_masks()
    cand = [y for y in range(g.n_cols) if row[y] == o_star and not cols[y] & bad_mask]
    if not cand:
        raise NEGuaranteeViolated(f"no admissible column for x0={x0}; is the form tight?")
    y_star = next(
        y for y in cand if not any(cols[z] != cols[y] and cols[z] & cols[y] == cols[z] for z in cand)
    )
    if not is_nash_equilibrium(g, rA, rB, x0, y_star):
        raise NEGuaranteeViolated(f"({x0}, {y_star}) is not an NE")
    return x0, y_star


def lex_safe_ne_swapped(g: GameForm, rA: Sequence, rB: Sequence) -> tuple[int, int]:
    """The same construction with the roles of Alice and Bob exchanged."""
    y0, x_star = lex_safe_ne(g.transpose(), rB, rA)
    return x_star, y0


def lex_safe_pair(g: GameForm, rA: Sequence, rB: Sequence) -> tuple[int, int]:
    """Both players' lexicographically safe strategies ``(x0, y0)``."""
    return lex_safe_strategy(g, rA), lex_safe_strategy(g.transpose(), rB)


def check_lex_ne(g: GameForm, rA, rB) -> tuple[int, int]:
    """Run :func:`lex_safe_ne` and assert simplicity and basicness."""
    x, y = lex_safe_ne(g, rA, rB)
    brows, bcols = basic_strategies(g)
    if not is_simple(g, x, y) or x not in brows or y not in bcols:
        raise NEGuaranteeViolated(f"({x}, {y}) is not a simple NE in basic strategies")
    return x, y
