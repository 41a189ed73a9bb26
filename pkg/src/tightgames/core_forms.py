"""Two-person game forms and their structural predicates.

A game form is an ``|X| x |Y|`` table of outcome ids. Outcome ids are dense
integers ``0..n_outcomes-1`` and every one of them must occur in the table.
Labels are carried for display only.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

__all__ = [
    "GameForm",
    "InvalidFormError",
    "supports",
    "support_masks",
    "basic_strategies",
    "is_simple",
    "is_rectangular",
    "is_rectangular_boxes",
    "relabel_canonical",
    "all_forms",
    "random_form",
    "mask_to_set",
    "set_to_mask",
]


class InvalidFormError(ValueError):
    """Raised when a table violates a game-form invariant."""


def mask_to_set(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def set_to_mask(s) -> int:
    m = 0
    for o in s:
        m |= 1 << o
    return m


class GameForm:
    """Immutable outcome table ``g : X x Y -> O``."""

    __slots__ = ("_table", "n_outcomes", "labels", "_rows", "_cols")

    def __init__(self, table, labels: Optional[Sequence[str]] = None):
        arr = np.array(table, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidFormError("game form table must be a non-empty 2-d array")
        if arr.min() < 0:
            raise InvalidFormError("outcome ids must be non-negative")
        n = int(arr.max()) + 1
        present = np.zeros(n, dtype=bool)
        present[arr.ravel()] = True
        if not present.all():
            missing = [int(i) for i in np.flatnonzero(~present)]
            raise InvalidFormError(f"outcome ids {missing} never occur (g must be surjective)")
        arr.setflags(write=False)
        self._table = arr
        self.n_outcomes = n
        if labels is not None and len(labels) != n:
            raise InvalidFormError("one label per outcome required")
        self.labels = tuple(labels) if labels is not None else None
        self._rows = None
        self._cols = None

    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def shape(self) -> tuple[int, int]:
        return self._table.shape

    @property
    def n_rows(self) -> int:
        return self._table.shape[0]

    @property
    def n_cols(self) -> int:
        return self._table.shape[1]

    def __call__(self, x: int, y: int) -> int:
        return int(self._table[x, y])

    def to_lists(self) -> list[list[int]]:
        return self._table.tolist()

    def __eq__(self, other):
        return isinstance(other, GameForm) and np.array_equal(self._table, other._table)

    def __hash__(self):
        return hash((self._table.shape, self._table.tobytes()))

    def __repr__(self):
        return f"GameForm({self.to_lists()})"

    # bitmask supports are cached; they are used by almost every algorithm
    def row_masks(self) -> tuple[int, ...]:
        if self._rows is None:
            self._rows = tuple(set_to_mask(set(map(int, r))) for r in self._table)
        return self._rows

    def col_masks(self) -> tuple[int, ...]:
        if self._cols is None:
            self._cols = tuple(set_to_mask(set(map(int, c))) for c in self._table.T)
        return self._cols

    def transpose(self) -> "GameForm":
        return GameForm(self._table.T, self.labels)


def support_masks(g: GameForm) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return g.row_masks(), g.col_masks()


def supports(g: GameForm) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
    """Row supports ``g(x)`` and column supports ``g(y)`` as outcome sets."""
    rows, cols = support_masks(g)
    return [mask_to_set(m) for m in rows], [mask_to_set(m) for m in cols]


def _minimal(masks: Sequence[int]) -> frozenset[int]:
    keep = []
    for i, m in enumerate(masks):
        # another support strictly inside m disqualifies m
        if not any(o != m and (o & m) == o for o in masks):
            keep.append(i)
    return frozenset(keep)


def basic_strategies(g: GameForm) -> tuple[frozenset[int], frozenset[int]]:
    """Indices of rows and columns whose support is inclusion-minimal."""
    rows, cols = support_masks(g)
    return _minimal(rows), _minimal(cols)


def is_simple(g: GameForm, x: int, y: int) -> bool:
    """True iff ``g(x) & g(y) == {g(x, y)}``."""
    if not (0 <= x < g.n_rows and 0 <= y < g.n_cols):
        raise IndexError(f"situation ({x}, {y}) outside a {g.n_rows}x{g.n_cols} form")
    rows, cols = support_masks(g)
    return rows[x] & cols[y] == 1 << g(x, y)


def is_rectangular(g: GameForm) -> bool:
    """Every situation simple."""
    return all(is_simple(g, x, y) for x in range(g.n_rows) for y in range(g.n_cols))


def is_rectangular_boxes(g: GameForm) -> bool:
    """Box test: each preimage ``g^-1(o)`` equals ``X' x Y'``."""
    t = g.table
    for o in range(g.n_outcomes):
        hit = t == o
        xs = hit.any(axis=1)
        ys = hit.any(axis=0)
        if not hit[np.ix_(xs, ys)].all():
            return False
    return True


def relabel_canonical(g: GameForm) -> GameForm:
    """Rename outcomes in order of first appearance (row-major)."""
    order: dict[int, int] = {}
    for o in g.table.ravel():
        order.setdefault(int(o), len(order))
    return GameForm([[order[int(o)] for o in row] for row in g.table])


def all_forms(max_rows: int, max_cols: int, max_outcomes: int):
    """Every surjective form up to the given sizes, one per outcome relabelling.

    Tables are restricted-growth strings in row-major order, so each
    relabelling class appears exactly once.
    """
    for nx in range(1, max_rows + 1):
        for ny in range(1, max_cols + 1):
            cells = nx * ny

            def grow(prefix, top):
                if len(prefix) == cells:
                    yield prefix
                    return
                for o in range(min(top + 2, max_outcomes)):
                    yield from grow(prefix + [o], max(top, o))

            for flat in grow([], -1):
                yield GameForm([flat[r * ny:(r + 1) * ny] for r in range(nx)])


def random_form(rng: np.random.Generator, nx: int, ny: int, n_outcomes: int) -> GameForm:
    """Uniform surjective ``nx x ny`` form with exactly ``n_outcomes`` outcomes."""
    if n_outcomes > nx * ny:
        raise ValueError("more outcomes than cells")
    while True:
        flat = rng.integers(0, n_outcomes, nx * ny)
        if len(set(flat.tolist())) == n_outcomes:
            return GameForm(flat.reshape(nx, ny))
