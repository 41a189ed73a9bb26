"""Hypothesis strategies for the package's value types."""

from fractions import Fraction

from hypothesis import strategies as st

from tightgames.core_forms import GameForm, relabel_canonical


@st.composite
def game_forms(draw, max_rows=3, max_cols=3, max_outcomes=4):
    nx = draw(st.integers(1, max_rows))
    ny = draw(st.integers(1, max_cols))
    k = draw(st.integers(1, max_outcomes))
    flat = draw(st.lists(st.integers(0, k - 1), min_size=nx * ny, max_size=nx * ny))
    # dense relabelling keeps the form surjective
    ids = {o: i for i, o in enumerate(sorted(set(flat)))}
    g = GameForm([[ids[flat[r * ny + c]] for c in range(ny)] for r in range(nx)])
    return relabel_canonical(g)


def rationals(lo=-5, hi=5, max_den=4):
    return st.builds(Fraction, st.integers(lo, hi), st.integers(1, max_den))


@st.composite
def rewards(draw, n):
    return [draw(rationals()) for _ in range(n)]
