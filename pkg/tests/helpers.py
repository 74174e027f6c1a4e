"""Shared grid utilities for the test suite."""

from fractions import Fraction
from itertools import combinations

from gibbsback import dirichlet, pitman_yor


def compositions(n, j):
    """All ordered tuples of j positive ints summing to n."""
    for cuts in combinations(range(1, n), j - 1):
        bounds = (0,) + cuts + (n,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(j))


def partitions(n, j):
    """Decreasing multisets of j positive ints summing to n."""
    seen = {tuple(sorted(c, reverse=True)) for c in compositions(n, j)}
    return sorted(seen)


def grid_priors():
    """The five priors every grid-based test runs over."""
    return [
        pitman_yor(Fraction(1, 2), Fraction(1)),
        pitman_yor(Fraction(1, 3), Fraction(2)),
        pitman_yor(Fraction(-1, 2), Fraction(5, 2)),
        dirichlet(Fraction(1)),
        dirichlet(Fraction(5)),
    ]


def moment_orders(j, m, r_cap=3):
    """Feasible (l, r) pairs for a future sample of size m and j species."""
    for l in range(m + 1):
        for r in range(1, min(j, r_cap) + 1):
            if r * l <= m:
                yield l, r
