"""Exact two-phase simplex over :class:`fractions.Fraction`.

Solves ``max c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq`` and
``x >= 0``. Pivoting follows Bland's rule, so the method terminates on
degenerate problems. Everything is rational; no tolerances are involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

__all__ = ["LPResult", "linprog_exact", "feasible_point"]

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


class _Tableau:
    """Dense tableau with one row per constraint and an explicit basis."""

    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r, col):
        row = self.rows[r]
        p = row[col]
        if p != ONE:
            inv = ONE / p
            self.rows[r] = row = [v * inv for v in row]
            self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[col]
            if f:
                self.rows[i] = [a - f * b for a, b in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = col

    def reduced_costs(self, cost):
        # cost is a maximisation objective; returns c_j - c_B B^-1 A_j
        red = list(cost)
        for r, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[r]
                for j, v in enumerate(row):
                    if v:
                        red[j] -= cb * v
        return red

    def optimise(self, cost, allowed):
        """Maximise ``cost`` over the current basis. Returns False if unbounded."""
        while True:
            red = self.reduced_costs(cost)
            entering = next((j for j in range(len(red)) if allowed[j] and red[j] > 0), None)
            if entering is None:
                return True
            best = None
            for r, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[r] / a
                    key = (ratio, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return False
            self.pivot(best[1], entering)


def _as_fractions(rows):
    return [[Fraction(v) for v in row] for row in rows]


def linprog_exact(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
) -> LPResult:
    """Maximise ``c.x`` over ``{x >= 0 : A_ub x <= b_ub, A_eq x = b_eq}``.

    All inputs are converted to ``Fraction``. The returned ``x`` has one entry
    per column of ``c``.
    """
    n = len(c)
    A_ub = _as_fractions(A_ub)
    A_eq = _as_fractions(A_eq)
    b_ub = [Fraction(v) for v in b_ub]
    b_eq = [Fraction(v) for v in b_eq]
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("constraint matrix and right-hand side lengths differ")
    for row in A_ub + A_eq:
        if len(row) != n:
            raise ValueError("constraint row has wrong length")

    n_slack = len(A_ub)
    n_rows = len(A_ub) + len(A_eq)
    n_art = n_rows
    width = n + n_slack + n_art
    rows, rhs, basis = [], [], []
    for i in range(n_rows):
        if i < n_slack:
            row = A_ub[i] + [ONE if k == i else ZERO for k in range(n_slack)]
            b = b_ub[i]
        else:
            row = A_eq[i - n_slack] + [ZERO] * n_slack
            b = b_eq[i - n_slack]
        if b < 0:
            row = [-v for v in row]
            b = -b
        row = row + [ONE if k == i else ZERO for k in range(n_art)]
        rows.append(row)
        rhs.append(b)
        basis.append(n + n_slack + i)

    tab = _Tableau(rows, rhs, basis)
    art0 = n + n_slack
    phase1 = [ZERO] * (n + n_slack) + [-ONE] * n_art
    tab.optimise(phase1, [True] * width)
    if sum(tab.rhs[r] for r, b in enumerate(tab.basis) if b >= art0) != 0:
        return LPResult("infeasible")

    # drive zero-level artificials out of the basis; drop redundant rows
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= art0:
            col = next((j for j in range(art0) if tab.rows[r][j] != 0), None)
            if col is None:
                del tab.rows[r], tab.rhs[r], tab.basis[r]
                continue
            tab.pivot(r, col)
        r += 1

    cost = [Fraction(v) for v in c] + [ZERO] * (n_slack + n_art)
    allowed = [j < art0 for j in range(width)]
    if not tab.optimise(cost, allowed):
        return LPResult("unbounded")
    x = [ZERO] * width
    for r, b in enumerate(tab.basis):
        x[b] = tab.rhs[r]
    xs = tuple(x[:n])
    return LPResult("optimal", xs, sum((ci * xi for ci, xi in zip(cost, xs)), ZERO))


def feasible_point(A_ub=(), b_ub=(), A_eq=(), b_eq=(), n=None) -> Optional[tuple[Fraction, ...]]:
    """Return some ``x >= 0`` satisfying the constraints, or ``None``."""
    if n is None:
        n = len((list(A_ub) + list(A_eq))[0])
    res = linprog_exact([0] * n, A_ub, b_ub, A_eq, b_eq)
    return res.x if res.status == "optimal" else None
