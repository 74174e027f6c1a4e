"""Exact partition laws under a Gibbs prior.

Everything here is a pure function of immutable inputs.  Infeasible query
points (a multiplicity vector or subset total that cannot occur) return
probability zero; dimension violations such as r > j raise ``ValueError``.
"""

from __future__ import annotations

import math
from typing import Sequence

from .numerics import Scalar, make_scalar, rising_factorial, scalar_mode
from .priors import GibbsPrior
from .stirling import build_triangle

__all__ = [
    "eppf",
    "multivariate_gibbs_pmf",
    "block_count_pmf",
    "conditional_multiplicity_pmf",
    "subset_sum_pmf",
]


def _check_multiplicities(multiplicities) -> tuple:
    mults = tuple(int(v) for v in multiplicities)
    if not mults:
        raise ValueError("need at least one block")
    if any(v < 1 for v in mults):
        raise ValueError(f"block sizes must be positive, got {mults}")
    return mults


def eppf(prior: GibbsPrior, multiplicities: Sequence[int]) -> Scalar:
    """Probability of one specific partition with the given block sizes in
    order of appearance: V[n,j] * prod_i (1-alpha) ... (n_i-1-alpha)."""
    mults = _check_multiplicities(multiplicities)
    n, j = sum(mults), len(mults)
    value = prior.weight(n, j)
    for size in mults:
        value = value * rising_factorial(1 - prior.alpha, size - 1)
    return value


def multivariate_gibbs_pmf(prior: GibbsPrior, multiplicities: Sequence[int]) -> Scalar:
    """Joint pmf of the block sizes in exchangeable random order and the
    block count: n! / (prod_i n_i! * j!) times the partition probability."""
    mults = _check_multiplicities(multiplicities)
    n, j = sum(mults), len(mults)
    count = math.factorial(n) // math.factorial(j)
    denom = 1
    for size in mults:
        denom *= math.factorial(size)
    factor = make_scalar(count, prior.mode) / make_scalar(denom, prior.mode)
    return factor * eppf(prior, mults)


def block_count_pmf(prior: GibbsPrior, n: int, j: int) -> Scalar:
    """P(number of species in a sample of size n equals j)."""
    if not 1 <= j <= n:
        raise ValueError(f"need 1 <= j <= n, got j={j}, n={n}")
    tri = build_triangle(prior.alpha, make_scalar(0, prior.mode), n)
    return prior.weight(n, j) * tri.value(n, j)


def conditional_multiplicity_pmf(
    alpha: Scalar, n: int, j: int, values: Sequence[int]
) -> Scalar:
    """Marginal law of r block sizes in exchangeable order given the block
    count.

    Depends on the prior only through the discount.  ``values`` holds the r
    candidate sizes; infeasible vectors get probability zero.
    """
    r = len(values)
    if not 1 <= j <= n:
        raise ValueError(f"need 1 <= j <= n, got j={j}, n={n}")
    if r > j:
        raise ValueError(f"cannot condition on more blocks ({r}) than exist ({j})")
    mode = scalar_mode(alpha)
    zero = make_scalar(0, mode)
    sizes = tuple(int(v) for v in values)
    total = sum(sizes)
    if any(v < 1 for v in sizes) or total > n - (j - r):
        return zero
    tri = build_triangle(alpha, make_scalar(0, mode), n)
    count = math.factorial(n) // math.factorial(n - total)
    for v in sizes:
        count //= math.factorial(v)
    j_falling = 1
    for i in range(r):
        j_falling *= j - i
    value = make_scalar(count, mode) / make_scalar(j_falling, mode)
    for v in sizes:
        value = value * rising_factorial(1 - alpha, v - 1)
    return value * tri.value(n - total, j - r) / tri.value(n, j)


def subset_sum_pmf(alpha: Scalar, n: int, j: int, r: int, s: int) -> Scalar:
    """Law of the total size of r exchangeably chosen blocks given the block
    count: support is r <= s <= n-(j-r), zero outside."""
    if not 1 <= j <= n:
        raise ValueError(f"need 1 <= j <= n, got j={j}, n={n}")
    if not 0 <= r <= j:
        raise ValueError(f"need 0 <= r <= j, got r={r}, j={j}")
    mode = scalar_mode(alpha)
    if s < r or s > n - (j - r):
        return make_scalar(0, mode)
    tri = build_triangle(alpha, make_scalar(0, mode), n)
    factor = make_scalar(math.comb(n, s), mode) / make_scalar(math.comb(j, r), mode)
    return factor * tri.value(s, r) * tri.value(n - s, j - r) / tri.value(n, j)
