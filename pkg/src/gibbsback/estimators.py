"""Falling factorial moments of re-observation counts in a future sample.

Given an initial sample of size n containing j species, and a future sample
of size m, the estimand is either

* the number of initially seen species that show up exactly l more times
  (``target="rl"``; l = 0 counts the species never seen again), or
* the number of initially seen species re-observed at least once
  (``target="rm"``), which is j minus the l = 0 count.

Both are computed under complete information (the initial multiplicities
are known) or incomplete information (only n and j are known), for any
Gibbs prior.  The incomplete case averages the complete-information moment
over the conditional law of the multiplicities; the closed form below does
that averaging analytically through a discount tilt of the Stirling
triangle (discount alpha - l) and a shifted triangle over the future
sample.  Tests verify this equivalence term by term and against exhaustive
enumeration.

Sign conventions pinned by the enumeration oracle:

* the shifted triangle used in the future-sample kernel has basis shift
  s + (j - r) * alpha - n;
* the tilted triangle in the incomplete-information sum has discount
  alpha - l.

These are echoed in ``MomentReport.conventions`` for diagnosability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .numerics import LOG, LogScalar, Scalar, make_scalar, rising_factorial
from .priors import GibbsPrior, SampleSummary
from .stirling import build_triangle, moments_to_pmf, recombination_coefficients

__all__ = [
    "TARGET_EXACTLY",
    "TARGET_AT_LEAST_ONCE",
    "BackwardQuery",
    "MomentReport",
    "future_weight_kernel",
    "complete_info_moment",
    "incomplete_info_moment",
    "total_reobserved_moment",
    "backward_report",
]

TARGET_EXACTLY = "rl"  # species re-observed exactly l times
TARGET_AT_LEAST_ONCE = "rm"  # species re-observed at least once

CONVENTIONS = {
    "kernel_shift": "s + (j - r)*alpha - n",
    "tilt_discount": "alpha - l",
}


def _count_prefactor(mode: str, m: int, l: int, r: int) -> Scalar:
    """r! * m! / ((l!)**r * (m - r*l)!) in the requested backend."""
    if mode == LOG:
        logval = (
            math.lgamma(r + 1)
            + math.lgamma(m + 1)
            - r * math.lgamma(l + 1)
            - math.lgamma(m - r * l + 1)
        )
        return LogScalar(1, logval)
    return Fraction(
        math.factorial(r) * math.factorial(m),
        math.factorial(l) ** r * math.factorial(m - r * l),
    )


def _check_orders(j: int, m: int, l: int, r: int) -> None:
    if m < 0:
        raise ValueError(f"future sample size must be nonnegative, got {m}")
    if l < 0:
        raise ValueError(f"re-observation count must be nonnegative, got {l}")
    if r < 0:
        raise ValueError(f"moment order must be nonnegative, got {r}")
    if r > j:
        raise ValueError(f"moment order r={r} exceeds the species count j={j}")
    if r * l > m:
        raise ValueError(
            f"r*l = {r * l} re-observations cannot fit in a future sample of size {m}"
        )


def future_weight_kernel(
    prior: GibbsPrior, n: int, j: int, m: int, r: int, l: int, s: int
) -> Scalar:
    """Shared posterior kernel over the number of new species.

    Sums, over the number k of species that are new in the future sample,
    the weight ratio V[n+m, j+k] / V[n, j] times the shifted-triangle count
    coefficient for the m - r*l future draws not pinned to the r tagged
    species, whose total initial multiplicity is s.
    """
    if not 1 <= j <= n:
        raise ValueError(f"need 1 <= j <= n, got j={j}, n={n}")
    _check_orders(j, m, l, r)
    if s < r or s > n - (j - r):
        raise ValueError(
            f"tagged total s={s} outside the feasible range [{r}, {n - (j - r)}]"
        )
    alpha = prior.alpha
    shift = s + (j - r) * alpha - n
    depth = m - r * l
    tri = build_triangle(alpha, shift, depth)
    base = prior.weight(n, j)
    acc = make_scalar(0, prior.mode)
    for k in range(depth + 1):
        coeff = tri.value(depth, k)
        acc = acc + (prior.weight(n + m, j + k) / base) * coeff
    return acc


def complete_info_moment(
    prior: GibbsPrior,
    multiplicities: Sequence[int],
    m: int,
    l: int,
    r: int,
) -> Scalar:
    """r-th falling factorial moment of the exactly-l re-observation count,
    given the full initial multiplicities."""
    mults = tuple(int(v) for v in multiplicities)
    if any(v < 1 for v in mults) or not mults:
        raise ValueError(f"multiplicities must be positive, got {mults}")
    n, j = sum(mults), len(mults)
    _check_orders(j, m, l, r)
    if r == 0:
        return make_scalar(1, prior.mode)
    alpha = prior.alpha
    acc = make_scalar(0, prior.mode)
    for chosen in combinations(range(j), r):
        term = make_scalar(1, prior.mode)
        total = 0
        for i in chosen:
            term = term * rising_factorial(mults[i] - alpha, l)
            total += mults[i]
        acc = acc + term * future_weight_kernel(prior, n, j, m, r, l, total)
    return _count_prefactor(prior.mode, m, l, r) * acc


def incomplete_info_moment(
    prior: GibbsPrior, n: int, j: int, m: int, l: int, r: int
) -> Scalar:
    """r-th falling factorial moment of the exactly-l re-observation count,
    knowing only the initial sample size and species count.

    Equals the conditional-multiplicity average of
    :func:`complete_info_moment`; the average is carried out analytically
    via the discount tilt alpha - l.
    """
    if not 1 <= j <= n:
        raise ValueError(f"need 1 <= j <= n, got j={j}, n={n}")
    _check_orders(j, m, l, r)
    if r == 0:
        return make_scalar(1, prior.mode)
    alpha = prior.alpha
    zero = make_scalar(0, prior.mode)
    tilted = build_triangle(alpha - l, make_scalar(0, prior.mode), n)
    central = build_triangle(alpha, make_scalar(0, prior.mode), n)
    acc = zero
    for s in range(r, n - (j - r) + 1):
        weight = (
            make_scalar(math.comb(n, s), prior.mode)
            * tilted.value(s, r)
            * central.value(n - s, j - r)
            / central.value(n, j)
        )
        acc = acc + weight * future_weight_kernel(prior, n, j, m, r, l, s)
    scale = rising_factorial(1 - alpha, l) ** r
    return _count_prefactor(prior.mode, m, l, r) * scale * acc


def _never_seen_moment(prior, data: SampleSummary, m: int, v: int) -> Scalar:
    if data.complete:
        return complete_info_moment(prior, data.multiplicities, m, 0, v)
    return incomplete_info_moment(prior, data.n, data.j, m, 0, v)


def total_reobserved_moment(
    prior: GibbsPrior, data: SampleSummary, m: int, r: int
) -> Scalar:
    """r-th falling factorial moment of the number of initially seen species
    re-observed at least once.

    That count is j minus the never-re-observed count, so its falling
    factorial expands over the l = 0 moments of orders 0..r via the exact
    recombination coefficients.
    """
    if r < 0:
        raise ValueError(f"moment order must be nonnegative, got {r}")
    if r > data.j:
        raise ValueError(f"moment order r={r} exceeds the species count j={data.j}")
    if m < 0:
        raise ValueError(f"future sample size must be nonnegative, got {m}")
    coeffs = recombination_coefficients(r, data.j)
    acc = make_scalar(0, prior.mode)
    for v, coeff in enumerate(coeffs):
        acc = acc + make_scalar(coeff, prior.mode) * _never_seen_moment(
            prior, data, m, v
        )
    return acc


@dataclass(frozen=True)
class BackwardQuery:
    """One batch request: a prior, the observed summary, the future sample
    size, the target count, and the highest moment order wanted.

    ``l`` is only meaningful for the exactly-l target.  Orders beyond j (or
    with r*l > m) are reported as zero rather than rejected, unlike the
    scalar entry points.
    """

    prior: GibbsPrior
    data: SampleSummary
    m: int
    r_max: int
    l: int = 0
    target: str = TARGET_EXACTLY

    def __post_init__(self):
        if self.m < 0:
            raise ValueError(f"future sample size must be nonnegative, got {self.m}")
        if self.r_max < 0:
            raise ValueError(f"r_max must be nonnegative, got {self.r_max}")
        if self.target not in (TARGET_EXACTLY, TARGET_AT_LEAST_ONCE):
            raise ValueError(f"unknown target {self.target!r}")
        if self.target == TARGET_EXACTLY and not 0 <= self.l <= max(self.m, 0):
            raise ValueError(f"need 0 <= l <= m, got l={self.l}, m={self.m}")


@dataclass
class MomentReport:
    """Moments (and optionally the recovered pmf) for one query."""

    target: str
    info: str
    mode: str
    n: int
    j: int
    m: int
    l: Optional[int]
    r_max: int
    multiplicities: Optional[tuple]
    prior: dict
    moments: list
    pmf: Optional[list] = None
    conventions: dict = field(default_factory=lambda: dict(CONVENTIONS))


def backward_report(query: BackwardQuery) -> MomentReport:
    """Evaluate moments for r = 0..r_max, recovering the pmf when the
    moment vector determines it (r_max >= j)."""
    prior, data = query.prior, query.data
    j, m, l = data.j, query.m, query.l
    zero = make_scalar(0, prior.mode)
    moments = [make_scalar(1, prior.mode)]
    for r in range(1, query.r_max + 1):
        if r > j:
            moments.append(zero)
        elif query.target == TARGET_EXACTLY:
            if r * l > m:
                moments.append(zero)
            elif data.complete:
                moments.append(
                    complete_info_moment(prior, data.multiplicities, m, l, r)
                )
            else:
                moments.append(incomplete_info_moment(prior, data.n, j, m, l, r))
        else:
            moments.append(total_reobserved_moment(prior, data, m, r))
    pmf = None
    if query.r_max >= j:
        pmf = moments_to_pmf(moments[: j + 1], j)
    return MomentReport(
        target=query.target,
        info="complete" if data.complete else "incomplete",
        mode=prior.mode,
        n=data.n,
        j=j,
        m=m,
        l=l if query.target == TARGET_EXACTLY else None,
        r_max=query.r_max,
        multiplicities=data.multiplicities,
        prior=prior.describe(),
        moments=moments,
        pmf=pmf,
    )
