"""Ground-truth generators used to validate every closed-form estimator.

Two independent routes are provided:

* exhaustive enumeration of every sequence of m future observations,
  weighting each path by the product of one-step predictive probabilities
  ((count - alpha) * V[n+1,j] / V[n,j] to join an existing species,
  V[n+1,j+1] / V[n,j] to found a new one), and
* a vectorized sequential Monte Carlo sampler over the same predictive
  rule, with counter-indexed substreams so results are reproducible and
  independent of how batches are distributed across workers.

Enumeration is exact in the prior's numeric mode and is the arbiter for
all sign conventions in the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .estimators import TARGET_AT_LEAST_ONCE, TARGET_EXACTLY
from .laws import conditional_multiplicity_pmf
from .numerics import Scalar, falling_factorial, make_scalar, sign_of, to_float
from .priors import GibbsPrior

__all__ = [
    "ContinuationOutcome",
    "McEstimate",
    "EnumerationSizeError",
    "enumerate_continuations",
    "oracle_moment",
    "oracle_incomplete_moment",
    "mc_sample",
]

ENUMERATION_GUARD = 10**7


class EnumerationSizeError(ValueError):
    """The continuation space is too large to enumerate."""


@dataclass(frozen=True)
class ContinuationOutcome:
    """One fully resolved continuation of the observed sample.

    ``old_added`` counts the future observations landing on each initially
    seen species; ``new_counts`` are the multiplicities of the new species
    in order of appearance; ``weight`` is the exact path probability.
    """

    old_added: tuple
    new_counts: tuple
    weight: Scalar

    @property
    def new_species(self) -> int:
        return len(self.new_counts)

    def reobserved_exactly(self, l: int) -> int:
        return sum(1 for a in self.old_added if a == l)

    def reobserved_at_least_once(self) -> int:
        return sum(1 for a in self.old_added if a >= 1)

    def statistic(self, target: str, l: Optional[int] = None) -> int:
        if target == TARGET_EXACTLY:
            if l is None:
                raise ValueError("the exactly-l target needs l")
            return self.reobserved_exactly(l)
        if target == TARGET_AT_LEAST_ONCE:
            return self.reobserved_at_least_once()
        raise ValueError(f"unknown target {target!r}")


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo mean with its standard error (sample sd / sqrt(count))."""

    estimate: float
    std_error: float
    count: int
    seed: int


def enumerate_continuations(
    prior: GibbsPrior, multiplicities: Sequence[int], m: int
) -> list:
    """All weighted outcomes of m further observations after the given sample.

    Walks observation-by-observation, so each path weight is a product of
    one-step predictive probabilities; zero-probability branches (e.g. a
    capped finite-species prior at its cap) are pruned.
    """
    mults = tuple(int(v) for v in multiplicities)
    if not mults or any(v < 1 for v in mults):
        raise ValueError(f"multiplicities must be positive, got {mults}")
    if m < 0:
        raise ValueError(f"future sample size must be nonnegative, got {m}")
    j0 = len(mults)
    if (j0 + m) ** m > ENUMERATION_GUARD:
        raise EnumerationSizeError(
            f"about {(j0 + m) ** m} sequences exceed the guard {ENUMERATION_GUARD}"
        )
    n0 = sum(mults)
    one = make_scalar(1, prior.mode)
    outcomes: list = []

    def walk(counts, depth, weight):
        if depth == m:
            old_added = tuple(counts[i] - mults[i] for i in range(j0))
            outcomes.append(
                ContinuationOutcome(old_added, tuple(counts[j0:]), weight)
            )
            return
        n_cur = n0 + depth
        j_cur = len(counts)
        base = prior.weight(n_cur, j_cur)
        ratio_old = prior.weight(n_cur + 1, j_cur) / base
        for i, count in enumerate(counts):
            w = weight * (count - prior.alpha) * ratio_old
            if sign_of(w) != 0:
                walk(counts[:i] + (count + 1,) + counts[i + 1 :], depth + 1, w)
        w = weight * (prior.weight(n_cur + 1, j_cur + 1) / base)
        if sign_of(w) != 0:
            walk(counts + (1,), depth + 1, w)

    walk(mults, 0, one)
    return outcomes


def oracle_moment(
    outcomes: Sequence[ContinuationOutcome],
    target: str,
    l: Optional[int],
    r: int,
) -> Scalar:
    """Expectation of the falling factorial of the target statistic,
    straight from the definition: sum of weight * stat*(stat-1)*..."""
    if not outcomes:
        raise ValueError("no outcomes supplied")
    acc = outcomes[0].weight * 0
    for outcome in outcomes:
        stat = outcome.statistic(target, l)
        acc = acc + outcome.weight * falling_factorial(stat, r)
    return acc


def _compositions(n: int, j: int):
    for cuts in combinations(range(1, n), j - 1):
        bounds = (0,) + cuts + (n,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(j))


def oracle_incomplete_moment(
    prior: GibbsPrior,
    n: int,
    j: int,
    m: int,
    target: str,
    l: Optional[int],
    r: int,
) -> Scalar:
    """Incomplete-information moment by definition: average the enumeration
    moment over the conditional law of the initial multiplicities."""
    if not 1 <= j <= n:
        raise ValueError(f"need 1 <= j <= n, got j={j}, n={n}")
    acc = make_scalar(0, prior.mode)
    cache: dict = {}
    for mults in _compositions(n, j):
        key = tuple(sorted(mults))
        moment = cache.get(key)
        if moment is None:
            outcomes = enumerate_continuations(prior, mults, m)
            moment = oracle_moment(outcomes, target, l, r)
            cache[key] = moment
        weight = conditional_multiplicity_pmf(prior.alpha, n, j, mults)
        acc = acc + weight * moment
    return acc


def _predictive_tables(prior, n0: int, j0: int, m: int):
    """Float ratio tables: for draw t and j0+dj current species,
    old[t][dj] = V[n+1,j]/V[n,j] and new[t][dj] = V[n+1,j+1]/V[n,j]."""
    old = np.zeros((m, m + 1))
    new = np.zeros((m, m + 1))
    for t in range(m):
        n_cur = n0 + t
        for dj in range(t + 1):
            j_cur = j0 + dj
            base = to_float(prior.weight(n_cur, j_cur))
            if base == 0.0:
                continue  # unreachable state (finite-species cap)
            old[t, dj] = to_float(prior.weight(n_cur + 1, j_cur)) / base
            new[t, dj] = to_float(prior.weight(n_cur + 1, j_cur + 1)) / base
    return old, new


def _fall(values: np.ndarray, r: int) -> np.ndarray:
    out = np.ones_like(values, dtype=np.float64)
    for i in range(r):
        out *= values - i
    return out


def mc_sample(
    prior: GibbsPrior,
    multiplicities: Sequence[int],
    m: int,
    count: int,
    seed: int,
    stats: Sequence[tuple] = ((TARGET_AT_LEAST_ONCE, None, 1),),
    batch_size: int = 10_000,
) -> dict:
    """Sequential predictive-rule sampler, vectorized over paths.

    ``stats`` lists (target, l, r) triples; the return maps each triple to
    a :class:`McEstimate`.  Sampling is split into fixed-size batches, each
    driven by a Philox stream keyed on (seed, batch index), so totals do
    not depend on how batches are assigned to workers and reruns with the
    same seed are bit-identical.
    """
    mults = tuple(int(v) for v in multiplicities)
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    j0, n0 = len(mults), sum(mults)
    alpha = to_float(prior.alpha)
    table_old, table_new = _predictive_tables(prior, n0, j0, m)
    init = np.array(mults, dtype=np.int64)

    sums = {spec: 0.0 for spec in stats}
    sumsq = {spec: 0.0 for spec in stats}
    for batch, start in enumerate(range(0, count, batch_size)):
        size = min(batch_size, count - start)
        rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence([seed, batch]))
        )
        counts = np.zeros((size, j0 + m), dtype=np.int64)
        counts[:, :j0] = init
        for t in range(m):
            j_cur = (counts > 0).sum(axis=1)
            vo = table_old[t, j_cur - j0]
            vn = table_new[t, j_cur - j0]
            probs = (counts - alpha) * (counts > 0) * vo[:, None]
            probs = np.concatenate([probs, vn[:, None]], axis=1)
            cum = np.cumsum(probs, axis=1)
            u = rng.random(size) * cum[:, -1]
            idx = (u[:, None] >= cum).sum(axis=1)
            new_mask = idx == j0 + m
            idx = np.where(new_mask, j_cur, idx)
            counts[np.arange(size), idx] += 1
        added = counts[:, :j0] - init
        for spec in stats:
            target, l, r = spec
            if target == TARGET_EXACTLY:
                stat = (added == l).sum(axis=1)
            elif target == TARGET_AT_LEAST_ONCE:
                stat = (added >= 1).sum(axis=1)
            else:
                raise ValueError(f"unknown target {target!r}")
            values = _fall(stat.astype(np.float64), r)
            sums[spec] += float(values.sum())
            sumsq[spec] += float((values * values).sum())

    out = {}
    for spec in stats:
        mean = sums[spec] / count
        if count > 1:
            var = max(0.0, (sumsq[spec] - count * mean * mean) / (count - 1))
        else:
            var = 0.0
        out[spec] = McEstimate(
            estimate=mean,
            std_error=math.sqrt(var / count),
            count=count,
            seed=seed,
        )
    return out
