"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the package's own algorithms: they
enumerate response maps, profiles and subsets directly.
"""

import itertools
from fractions import Fraction

import numpy as np
import pytest

from tightgames.textio import load_figure1


@pytest.fixture(scope="session")
def fig1():
    return load_figure1()


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(20240611))


def oracle_tight(table):
    """Tight iff every pair of response maps has intersecting graph images."""
    nx, ny = len(table), len(table[0])
    bob = {frozenset(table[x][phi[x]] for x in range(nx)) for phi in itertools.product(range(ny), repeat=nx)}
    alice = {frozenset(table[psi[y]][y] for y in range(ny)) for psi in itertools.product(range(nx), repeat=ny)}
    return all(a & b for a in bob for b in alice)


def oracle_ne(table_a, table_b):
    """Pure NE of a bimatrix game, both players maximising."""
    nx, ny = len(table_a), len(table_a[0])
    return sorted(
        (x, y)
        for x in range(nx)
        for y in range(ny)
        if all(table_a[i][y] <= table_a[x][y] for i in range(nx))
        and all(table_b[x][j] <= table_b[x][y] for j in range(ny))
    )


def oracle_saddle_exists(matrix):
    rows_min = [min(r) for r in matrix]
    cols_max = [max(c) for c in zip(*matrix)]
    return max(rows_min) == min(cols_max)


def frac_vec(*xs):
    return tuple(Fraction(x) for x in xs)
