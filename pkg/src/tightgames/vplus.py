"""v+-forms: non-negative vector forms with an all-infinite outcome.

Cells hold non-negative, non-zero rational vectors or :data:`WC`, the vector
whose entries are all ``+inf``. Both players minimise positive linear costs,
so a ``WC`` cell costs ``+inf`` to everyone.

A response strategy is a PBR ("possibly best response") when some strictly
positive cost vector makes it the unique best response vector in every
row. That is an LP feasibility question, solved exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .lp import linprog_exact

__all__ = [
    "WC",
    "VPlusForm",
    "Degeneracy",
    "PbrCertificate",
    "VPlusTightResult",
    "degeneracy",
    "is_degenerate_ne",
    "is_pbr",
    "response_choices",
    "pbr_list",
    "is_vplus_tight",
    "ne_set",
    "ne_exists_batch",
    "asumability_filter",
    "delete_degenerate",
    "random_vplus_form",
]

WC = None  # the all-infinite vector w^c

Vector = tuple[Fraction, ...]


def _entry(w):
    if w is None:
        return None
    return tuple(Fraction(a) for a in w)


def _cost(u: Sequence[Fraction], w) -> Fraction | float:
    if w is None:
        return math.inf
    return sum((a * b for a, b in zip(u, w)), Fraction(0))


class VPlusForm:
    """Table of non-negative non-zero vectors and ``WC`` entries."""

    __slots__ = ("table", "dim")

    def __init__(self, table, dim: Optional[int] = None, require_weakly_rectangular: bool = True):
        rows = tuple(tuple(_entry(w) for w in row) for row in table)
        if not rows or not rows[0] or len({len(r) for r in rows}) != 1:
            raise ValueError("v+-form table must be a non-empty rectangle")
        dims = {len(w) for r in rows for w in r if w is not None}
        if dim is None:
            if not dims:
                raise ValueError("dimension required for an all-WC form")
            dim = next(iter(dims))
        if dims - {dim}:
            raise ValueError("vectors differ in dimension")
        for r in rows:
            for w in r:
                if w is not None and (min(w) < 0 or max(w) <= 0):
                    raise ValueError(f"vector {w} is not non-negative and non-zero")
        self.table = rows
        self.dim = dim
        if require_weakly_rectangular and not self.is_weakly_rectangular():
            raise ValueError("some finite vector does not fill a box")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.table), len(self.table[0])

    def column(self, y: int) -> tuple:
        return tuple(r[y] for r in self.table)

    def transpose(self) -> "VPlusForm":
        return VPlusForm(list(zip(*self.table)), self.dim, require_weakly_rectangular=False)

    def vectors(self) -> list[Vector]:
        seen: dict = {}
        for r in self.table:
            for w in r:
                if w is not None:
                    seen.setdefault(w, None)
        return list(seen)

    def is_weakly_rectangular(self) -> bool:
        for w in self.vectors():
            cells = [(x, y) for x, r in enumerate(self.table) for y, v in enumerate(r) if v == w]
            xs = {x for x, _ in cells}
            ys = {y for _, y in cells}
            if len(cells) != len(xs) * len(ys):
                return False
        return True

    def __eq__(self, other):
        return isinstance(other, VPlusForm) and self.table == other.table and self.dim == other.dim

    def __hash__(self):
        return hash((self.table, self.dim))

    def __repr__(self):
        def fmt(w):
            return "INF" if w is None else "(" + ",".join(map(str, w)) + ")"

        return "VPlusForm([" + "; ".join(" ".join(fmt(w) for w in r) for r in self.table) + "])"


@dataclass(frozen=True)
class Degeneracy:
    rows: frozenset[int]
    cols: frozenset[int]
    form: bool


def degeneracy(gpv: VPlusForm) -> Degeneracy:
    rows = frozenset(x for x, r in enumerate(gpv.table) if all(w is None for w in r))
    nx, ny = gpv.shape
    cols = frozenset(y for y in range(ny) if all(gpv.table[x][y] is None for x in range(nx)))
    return Degeneracy(rows, cols, len(rows) == nx)


def is_degenerate_ne(gpv: VPlusForm, x: int, y: int) -> bool:
    """A ``WC`` situation is an NE iff both of its strategies are degenerate."""
    d = degeneracy(gpv)
    return gpv.table[x][y] is None and x in d.rows and y in d.cols


@dataclass(frozen=True)
class PbrCertificate:
    """Cost vector making ``strategy`` the unique best response vector everywhere.

    ``side`` is ``"bob"`` (``strategy[x]`` is a column) or ``"alice"``
    (``strategy[y]`` is a row).
    """

    side: str
    strategy: tuple[int, ...]
    u: Vector
    margin: Fraction

    def check(self, gpv: VPlusForm) -> bool:
        if self.margin <= 0 or len(self.u) != gpv.dim or min(self.u) <= 0:
            return False
        lines = _lines(gpv, self.side)
        if len(self.strategy) != len(lines):
            return False
        for line, k in zip(lines, self.strategy):
            if not 0 <= k < len(line):
                return False
            chosen = line[k]
            if chosen is None:
                if any(w is not None for w in line):
                    return False
                continue
            c = _cost(self.u, chosen)
            for w in line:
                if w is not None and w != chosen and c + self.margin > _cost(self.u, w):
                    return False
        return True


def _lines(gpv: VPlusForm, side: str) -> list[tuple]:
    if side == "bob":
        return list(gpv.table)
    if side == "alice":
        return [gpv.column(y) for y in range(gpv.shape[1])]
    raise ValueError(f"side must be 'alice' or 'bob', not {side!r}")


def _pbr_lp(lines: Sequence[tuple], strategy: Sequence[int], dim: int) -> Optional[Vector]:
    """Solve ``(u, w - chosen) >= 1`` for rival vectors ``w``, with ``u >= 1``."""
    A_ub, b_ub = [], []
    for line, k in zip(lines, strategy):
        chosen = line[k]
        if chosen is None:
            if any(w is not None for w in line):
                return None
            continue
        for w in {w for w in line if w is not None and w != chosen}:
            d = [a - b for a, b in zip(w, chosen)]
            # u = 1 + s with s >= 0:  -(d, s) <= sum(d) - 1
            A_ub.append([-v for v in d])
            b_ub.append(sum(d) - 1)
    if not A_ub:
        return tuple(Fraction(1) for _ in range(dim))
    res = linprog_exact([0] * dim, A_ub=A_ub, b_ub=b_ub)
    if res.status != "optimal":
        return None
    return tuple(1 + s for s in res.x)


def is_pbr(gpv: VPlusForm, strategy: Sequence[int], side: str = "bob") -> Optional[PbrCertificate]:
    lines = _lines(gpv, side)
    if len(strategy) != len(lines):
        raise ValueError("response strategy has the wrong length")
    u = _pbr_lp(lines, strategy, gpv.dim)
    if u is None:
        return None
    return PbrCertificate(side, tuple(strategy), u, Fraction(1))


def response_choices(gpv: VPlusForm, side: str) -> list[tuple[int, ...]]:
    """Response strategies with pairwise different selected-vector profiles.

    Two responses selecting the same entry in every line are interchangeable
    for PBR and tightness purposes; the lowest indices represent the class.
    """
    per_line = []
    for line in _lines(gpv, side):
        first: dict = {}
        for k, w in enumerate(line):
            first.setdefault(w, k)
        per_line.append(list(first.values()))
    return list(itertools.product(*per_line))


def pbr_list(gpv: VPlusForm, side: str) -> list[PbrCertificate]:
    out = []
    for s in response_choices(gpv, side):
        cert = is_pbr(gpv, s, side)
        if cert is not None:
            out.append(cert)
    return out


@dataclass(frozen=True)
class VPlusTightResult:
    tight: bool
    phi: Optional[PbrCertificate] = None  # Bob's PBR of a disjoint pair
    psi: Optional[PbrCertificate] = None  # Alice's PBR of a disjoint pair

    def __bool__(self):
        return self.tight


def _image(gpv: VPlusForm, cert: PbrCertificate) -> frozenset:
    lines = _lines(gpv, cert.side)
    return frozenset(line[k] for line, k in zip(lines, cert.strategy))


def is_vplus_tight(gpv: VPlusForm, budget: int = 10**6) -> VPlusTightResult:
    """Every pair of PBRs selects a common entry (``WC`` counts as an entry)."""
    nx, ny = gpv.shape
    if ny**nx + nx**ny > budget:
        from .tightness import BudgetExceeded

        raise BudgetExceeded(f"{ny**nx} + {nx**ny} responses exceed budget {budget}")
    bobs = [(c, _image(gpv, c)) for c in pbr_list(gpv, "bob")]
    alices = [(c, _image(gpv, c)) for c in pbr_list(gpv, "alice")]
    for cb, ib in bobs:
        for ca, ia in alices:
            if not ib & ia:
                return VPlusTightResult(False, cb, ca)
    return VPlusTightResult(True)


def ne_set(gpv: VPlusForm, uA: Sequence, uB: Sequence) -> list[tuple[int, int]]:
    """Situations where both players play a cost-minimising response."""
    uA = tuple(Fraction(a) for a in uA)
    uB = tuple(Fraction(a) for a in uB)
    if len(uA) != gpv.dim or len(uB) != gpv.dim:
        raise ValueError("cost vectors have the wrong dimension")
    if min(uA) <= 0 or min(uB) <= 0:
        raise ValueError("costs must be strictly positive")
    ca = [[_cost(uA, w) for w in r] for r in gpv.table]
    cb = [[_cost(uB, w) for w in r] for r in gpv.table]
    nx, ny = gpv.shape
    col_best = [min(ca[x][y] for x in range(nx)) for y in range(ny)]
    row_best = [min(r) for r in cb]
    return [
        (x, y)
        for x in range(nx)
        for y in range(ny)
        if ca[x][y] == col_best[y] and cb[x][y] == row_best[x]
    ]


def _integer_table(gpv: VPlusForm) -> tuple[np.ndarray, np.ndarray]:
    den = 1
    for w in gpv.vectors():
        for a in w:
            den = math.lcm(den, a.denominator)
    nx, ny = gpv.shape
    W = np.zeros((nx, ny, gpv.dim), dtype=np.int64)
    inf = np.zeros((nx, ny), dtype=bool)
    for x, r in enumerate(gpv.table):
        for y, w in enumerate(r):
            if w is None:
                inf[x, y] = True
            else:
                W[x, y] = [int(a * den) for a in w]
    return W, inf


def ne_exists_batch(
    gpv: VPlusForm, UA: np.ndarray, UB: np.ndarray, non_degenerate: bool = False
) -> np.ndarray:
    """Vectorised NE existence for integer cost pairs ``UA[k]``, ``UB[k]``.

    Exact integer arithmetic; ``WC`` cells get a sentinel above every finite
    cost. With ``non_degenerate`` only NE on finite cells count.
    """
    W, inf = _integer_table(gpv)
    ca = np.einsum("xym,km->kxy", W, UA)
    cb = np.einsum("xym,km->kxy", W, UB)
    big = max(int(ca.max(initial=0)), int(cb.max(initial=0))) + 1
    ca[:, inf] = big
    cb[:, inf] = big
    ok = (ca == ca.min(axis=1, keepdims=True)) & (cb == cb.min(axis=2, keepdims=True))
    if non_degenerate:
        ok &= ~inf[None]
    return ok.reshape(len(UA), -1).any(axis=1)


def asumability_filter(
    gpv: VPlusForm, side: str, subset: Sequence[int], phi1: Sequence[int], phi2: Sequence[int]
) -> str:
    """Necessary conditions for extending a partial response to a PBR.

    ``phi1[i]`` and ``phi2[i]`` are the choices at line ``subset[i]``. The
    2|X*| selected vectors must be finite and pairwise distinct. Returns
    ``"reject-phi1"`` when the sum of ``phi1``'s vectors dominates that of
    ``phi2`` (componentwise >=, not equal), ``"reject-both"`` when the sums
    are equal and ``|X*| >= 2``, and ``"pass"`` otherwise.
    """
    lines = _lines(gpv, side)
    if not subset or len(phi1) != len(subset) or len(phi2) != len(subset):
        raise ValueError("partial maps must be defined exactly on a non-empty subset")
    v1 = [lines[i][k] for i, k in zip(subset, phi1)]
    v2 = [lines[i][k] for i, k in zip(subset, phi2)]
    every = v1 + v2
    if any(w is None for w in every) or len(set(every)) != len(every):
        raise ValueError("selected vectors must be finite and pairwise distinct")
    s1 = [sum(c) for c in zip(*v1)]
    s2 = [sum(c) for c in zip(*v2)]
    if s1 == s2:
        return "reject-both" if len(subset) >= 2 else "pass"
    if all(a >= b for a, b in zip(s1, s2)):
        return "reject-phi1"
    return "pass"


def delete_degenerate(gpv: VPlusForm) -> VPlusForm:
    """Drop degenerate strategies of a player whose opponent has none."""
    d = degeneracy(gpv)
    t = [list(r) for r in gpv.table]
    if d.rows and not d.cols:
        t = [r for x, r in enumerate(t) if x not in d.rows]
    elif d.cols and not d.rows:
        t = [[w for y, w in enumerate(r) if y not in d.cols] for r in t]
    if not t or not t[0]:
        return gpv
    return VPlusForm(t, gpv.dim)


def random_vplus_form(
    rng: np.random.Generator,
    max_rows: int = 3,
    max_cols: int = 3,
    max_dim: int = 4,
    max_entry: int = 3,
    boxes: Optional[int] = None,
) -> VPlusForm:
    """Random weakly rectangular v+-form.

    Distinct random vectors are dropped onto random boxes that are still
    empty; whatever stays empty becomes ``WC``.
    """
    nx = int(rng.integers(1, max_rows + 1))
    ny = int(rng.integers(1, max_cols + 1))
    m = int(rng.integers(1, max_dim + 1))
    table: list[list] = [[None] * ny for _ in range(nx)]
    used: set = set()
    tries = boxes if boxes is not None else int(rng.integers(1, 2 * nx * ny + 1))
    for _ in range(tries):
        # small boxes are more likely, so injective-ish tables appear often
        px, py = rng.random(), rng.random()
        xs = [x for x in range(nx) if rng.random() < px / 2] or [int(rng.integers(nx))]
        ys = [y for y in range(ny) if rng.random() < py / 2] or [int(rng.integers(ny))]
        if any(table[x][y] is not None for x in xs for y in ys):
            continue
        for _ in range(20):
            w = tuple(Fraction(int(a)) for a in rng.integers(0, max_entry + 1, m))
            if max(w) > 0 and w not in used:
                break
        else:
            continue
        used.add(w)
        for x in xs:
            for y in ys:
                table[x][y] = w
    return VPlusForm(table, m)


def _subsets(items: Iterable[int], max_size: int):
    items = list(items)
    for k in range(1, max_size + 1):
        yield from itertools.combinations(items, k)
