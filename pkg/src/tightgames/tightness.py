"""Tightness of game forms.

Four equivalent tests are provided: the response-strategy definition
(:func:`is_tight_j`), the two one-sided variants (:func:`is_tight_jjA`,
:func:`is_tight_jjB`) and duality of the support hypergraphs
(:func:`is_dual` on :func:`build_hypergraphs`).

Outcome sets are handled as integer bitmasks internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core_forms import GameForm, mask_to_set, set_to_mask, support_masks

__all__ = [
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "TightnessWitness",
    "Hypergraph",
    "response_images",
    "tightness_witness",
    "is_tight_j",
    "is_tight_jjA",
    "is_tight_jjB",
    "build_hypergraphs",
    "minimal_transversals",
    "is_dual",
    "is_tight",
    "winlose_from_witness",
]

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """The requested enumeration is larger than the configured budget."""


@dataclass(frozen=True)
class TightnessWitness:
    """Response strategies ``phi: X -> Y`` (Bob) and ``psi: Y -> X`` (Alice)."""

    phi: tuple[int, ...]
    psi: tuple[int, ...]

    def images(self, g: GameForm) -> tuple[frozenset[int], frozenset[int]]:
        a = frozenset(g(x, y) for x, y in enumerate(self.phi))
        b = frozenset(g(x, y) for y, x in enumerate(self.psi))
        return a, b

    def is_valid(self, g: GameForm) -> bool:
        if len(self.phi) != g.n_rows or len(self.psi) != g.n_cols:
            return False
        if any(not 0 <= y < g.n_cols for y in self.phi):
            return False
        if any(not 0 <= x < g.n_rows for x in self.psi):
            return False
        a, b = self.images(g)
        return not (a & b)


@dataclass(frozen=True)
class Hypergraph:
    ground_size: int
    edges: tuple[frozenset[int], ...]

    def __post_init__(self):
        for e in self.edges:
            if not e:
                raise ValueError("hypergraph edges must be non-empty")
            if any(not 0 <= v < self.ground_size for v in e):
                raise ValueError(f"edge {set(e)} leaves the ground set")

    def masks(self) -> list[int]:
        return [set_to_mask(e) for e in self.edges]


def _check_budget(g: GameForm, budget: int) -> None:
    nx, ny = g.shape
    if ny**nx * nx**ny > budget:
        raise BudgetExceeded(
            f"{ny**nx} x {nx**ny} response pairs exceed budget {budget}; use the duality test"
        )


def _prune_minimal(states: dict[int, tuple]) -> dict[int, tuple]:
    masks = sorted(states, key=lambda m: bin(m).count("1"))
    kept: list[int] = []
    for m in masks:
        if not any(k & m == k for k in kept):
            kept.append(m)
    return {m: states[m] for m in kept}


def response_images(cells: Sequence[Sequence[int]]) -> dict[int, tuple[int, ...]]:
    """Inclusion-minimal images of response strategies.

    ``cells[i]`` lists the outcomes available to the responder against the
    ``i``-th opponent strategy. Returns ``{image_mask: choice_indices}`` for
    every inclusion-minimal image. Tightness-type properties are monotone in
    the image, so the minimal ones decide them.
    """
    states: dict[int, tuple] = {0: ()}
    for row in cells:
        nxt: dict[int, tuple] = {}
        seen = {}
        for j, o in enumerate(row):
            seen.setdefault(o, j)
        for mask, mp in states.items():
            for o, j in seen.items():
                nxt.setdefault(mask | (1 << o), mp + (j,))
        states = _prune_minimal(nxt)
    return states


def _bob_images(g: GameForm) -> dict[int, tuple[int, ...]]:
    return response_images(g.to_lists())


def _alice_images(g: GameForm) -> dict[int, tuple[int, ...]]:
    return response_images(g.table.T.tolist())


def tightness_witness(g: GameForm, budget: int = DEFAULT_BUDGET) -> Optional[TightnessWitness]:
    """A pair ``(phi, psi)`` with disjoint graph images, or ``None`` if ``g`` is tight."""
    _check_budget(g, budget)
    bob = _bob_images(g)
    alice = _alice_images(g)
    for ma, phi in bob.items():
        for mb, psi in alice.items():
            if not ma & mb:
                return TightnessWitness(phi, psi)
    return None


def is_tight_j(g: GameForm, budget: int = DEFAULT_BUDGET) -> bool:
    return tightness_witness(g, budget) is None


def is_tight_jjA(g: GameForm, budget: int = DEFAULT_BUDGET) -> bool:
    """Every Bob response image contains the support of some column."""
    _check_budget(g, budget)
    cols = g.col_masks()
    return all(any(c & m == c for c in cols) for m in _bob_images(g))


def is_tight_jjB(g: GameForm, budget: int = DEFAULT_BUDGET) -> bool:
    """Every Alice response image contains the support of some row."""
    _check_budget(g, budget)
    rows = g.row_masks()
    return all(any(r & m == r for r in rows) for m in _alice_images(g))


def build_hypergraphs(g: GameForm) -> tuple[Hypergraph, Hypergraph]:
    rows, cols = support_masks(g)
    n = g.n_outcomes
    return (
        Hypergraph(n, tuple(mask_to_set(m) for m in rows)),
        Hypergraph(n, tuple(mask_to_set(m) for m in cols)),
    )


def _minimal_masks(masks) -> set[int]:
    ms = set(masks)
    return {m for m in ms if not any(o != m and o & m == o for o in ms)}


def minimal_transversals(h: Hypergraph) -> set[int]:
    """Minimal transversals as bitmasks, by sequential edge multiplication."""
    edges = sorted(_minimal_masks(h.masks()), key=lambda m: bin(m).count("1"))
    if not edges:
        return {0}
    trs = {1 << v for v in mask_to_set(edges[0])}
    for e in edges[1:]:
        nxt = set()
        for t in trs:
            if t & e:
                nxt.add(t)
            else:
                for v in mask_to_set(e):
                    nxt.add(t | (1 << v))
        trs = _minimal_masks(nxt)
    return trs


def _dual_by_enumeration(a: list[int], b: list[int], n: int) -> bool:
    if any(not x & y for x in a for y in b):
        return False
    for s in range(1 << n):
        if all(s & y for y in b) and not any(x & s == x for x in a):
            return False
        if all(s & x for x in a) and not any(y & s == y for y in b):
            return False
    return True


def is_dual(a: Hypergraph, b: Hypergraph, method: str = "transversal") -> bool:
    """Duality of two hypergraphs on the same ground set.

    ``method="transversal"`` compares the minimal transversals of ``a`` with
    the minimal edges of ``b``; ``method="enumerate"`` scans all subsets of
    the ground set and is meant as an oracle for small ground sets.
    """
    if a.ground_size != b.ground_size:
        raise ValueError("hypergraphs live on different ground sets")
    if method == "transversal":
        return minimal_transversals(a) == _minimal_masks(b.masks())
    if method == "enumerate":
        return _dual_by_enumeration(a.masks(), b.masks(), a.ground_size)
    raise ValueError(f"unknown duality method {method!r}")


def is_tight(g: GameForm, method: str = "dual", budget: int = DEFAULT_BUDGET) -> bool:
    if method == "dual":
        return is_dual(*build_hypergraphs(g))
    if method == "j":
        return is_tight_j(g, budget)
    if method == "jjA":
        return is_tight_jjA(g, budget)
    if method == "jjB":
        return is_tight_jjB(g, budget)
    raise ValueError(f"unknown tightness method {method!r}")


def winlose_from_witness(g: GameForm, w: TightnessWitness) -> tuple[Fraction, ...]:
    """Zero-sum +-1 reward (Alice's side) without a saddle point.

    Outcomes hit by Bob's response ``phi`` are worth -1, those hit by Alice's
    ``psi`` are worth +1, and all other outcomes +1.
    """
    if not w.is_valid(g):
        raise ValueError("witness images intersect; no win-lose reward can be built")
    lose, _ = w.images(g)
    return tuple(Fraction(-1) if o in lose else Fraction(1) for o in range(g.n_outcomes))
