"""Self-verification grids: closed forms against the enumeration and Monte
Carlo oracles, runnable from the command line."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .estimators import (
    TARGET_AT_LEAST_ONCE,
    TARGET_EXACTLY,
    complete_info_moment,
    incomplete_info_moment,
    total_reobserved_moment,
)
from .laws import block_count_pmf, conditional_multiplicity_pmf
from .numerics import generalized_rising, rising_factorial
from .oracle import (
    _compositions,
    enumerate_continuations,
    mc_sample,
    oracle_incomplete_moment,
    oracle_moment,
)
from .priors import SampleSummary, dirichlet, pitman_yor
from .stirling import build_triangle

__all__ = ["VerificationCheck", "run_verification", "GRIDS"]


@dataclass
class VerificationCheck:
    name: str
    points: int = 0
    failures: int = 0

    def record(self, ok: bool) -> None:
        self.points += 1
        if not ok:
            self.failures += 1

    @property
    def ok(self) -> bool:
        return self.failures == 0


def _grid_priors():
    return [
        pitman_yor(Fraction(1, 2), Fraction(1)),
        pitman_yor(Fraction(1, 3), Fraction(2)),
        pitman_yor(Fraction(-1, 2), Fraction(5, 2)),
        dirichlet(Fraction(1)),
        dirichlet(Fraction(5)),
    ]


GRIDS = {
    # (priors, n_max, m_max, n_plus_m_max, mc_points, mc_count)
    "small": (2, 4, 2, 6, 6, 20_000),
    "full": (5, 6, 3, 8, 20, 100_000),
}


def _partitions(n, j):
    """Decreasing integer partitions of n into exactly j positive parts."""
    if j == 0:
        if n == 0:
            yield ()
        return
    for first in range(n - j + 1, 0, -1):
        for rest in _partitions(n - first, j - 1):
            if not rest or first >= rest[0]:
                yield (first,) + rest


def _mc_points(priors, m_max, limit):
    points = []
    shapes = [(2,), (1, 1), (2, 1), (3, 1), (1, 1, 1), (2, 2, 1)]
    specs = [
        (TARGET_EXACTLY, 0, 1),
        (TARGET_EXACTLY, 1, 1),
        (TARGET_AT_LEAST_ONCE, None, 1),
        (TARGET_AT_LEAST_ONCE, None, 2),
    ]
    i = 0
    while len(points) < limit:
        prior = priors[i % len(priors)]
        mults = shapes[i % len(shapes)]
        spec = specs[i % len(specs)]
        m = 2 + (i % max(m_max - 1, 1))
        if len(mults) <= prior.max_blocks(sum(mults)) and spec[2] <= len(mults):
            points.append((prior, mults, m, spec))
        i += 1
    return points


def run_verification(grid: str = "small", seed: int = 0, mc_count=None, out=print):
    """Run the oracle-vs-closed-form table; returns the list of checks."""
    if grid not in GRIDS:
        raise ValueError(f"unknown grid {grid!r}; choose from {sorted(GRIDS)}")
    n_priors, n_max, m_max, nm_max, mc_points, default_count = GRIDS[grid]
    if mc_count is None:
        mc_count = default_count
    priors = _grid_priors()[:n_priors]

    normalization = VerificationCheck("normalization of the species-count law")
    tower = VerificationCheck("incomplete = conditional average of complete")
    complete_enum = VerificationCheck("complete moments vs enumeration")
    incomplete_enum = VerificationCheck("incomplete moments vs enumeration")
    recombination = VerificationCheck("at-least-once moments vs enumeration")
    conservation = VerificationCheck("sum over l of E[count(l)] equals j")
    triangle = VerificationCheck("triangle connection identity")
    monte_carlo = VerificationCheck("Monte Carlo within 4 standard errors")

    for prior in priors:
        for gamma in (Fraction(0), Fraction(1)):
            tri = build_triangle(prior.alpha, gamma, n_max)
            for n in range(n_max + 1):
                for x in (Fraction(t, 2) for t in range(1, n + 2)):
                    lhs = rising_factorial(x, n)
                    rhs = sum(
                        tri.value(n, k) * generalized_rising(x + gamma, k, prior.alpha)
                        for k in range(n + 1)
                    )
                    triangle.record(lhs == rhs)
        for n in range(1, n_max + 1):
            total = sum(
                block_count_pmf(prior, n, j) for j in range(1, n + 1)
            )
            normalization.record(total == 1)
            for j in range(1, prior.max_blocks(n) + 1):
                for m in range(0, min(m_max, nm_max - n) + 1):
                    for mults in _partitions(n, j):
                        outs = enumerate_continuations(prior, mults, m)
                        for l in range(m + 1):
                            for r in range(1, min(j, 3) + 1):
                                if r * l > m:
                                    continue
                                closed = complete_info_moment(prior, mults, m, l, r)
                                complete_enum.record(
                                    closed == oracle_moment(outs, TARGET_EXACTLY, l, r)
                                )
                        data = SampleSummary(n, j, mults)
                        for r in range(1, min(j, 3) + 1):
                            closed = total_reobserved_moment(prior, data, m, r)
                            recombination.record(
                                closed
                                == oracle_moment(outs, TARGET_AT_LEAST_ONCE, None, r)
                            )
                    for l in range(m + 1):
                        for r in range(1, min(j, 3) + 1):
                            if r * l > m:
                                continue
                            closed = incomplete_info_moment(prior, n, j, m, l, r)
                            avg = sum(
                                conditional_multiplicity_pmf(prior.alpha, n, j, c)
                                * complete_info_moment(prior, c, m, l, r)
                                for c in _compositions(n, j)
                            )
                            tower.record(closed == avg)
                            oracle_value = oracle_incomplete_moment(
                                prior, n, j, m, TARGET_EXACTLY, l, r
                            )
                            incomplete_enum.record(closed == oracle_value)
                    total = sum(
                        incomplete_info_moment(prior, n, j, m, l, 1)
                        for l in range(m + 1)
                    )
                    conservation.record(total == j)

    for prior, mults, m, spec in _mc_points(priors, m_max, mc_points):
        outs = enumerate_continuations(prior, mults, m)
        exact = float(oracle_moment(outs, spec[0], spec[1], spec[2]))
        est = mc_sample(prior, mults, m, mc_count, seed, stats=(spec,))[spec]
        monte_carlo.record(abs(est.estimate - exact) <= 4 * est.std_error + 1e-12)

    checks = [
        triangle,
        normalization,
        tower,
        complete_enum,
        incomplete_enum,
        recombination,
        conservation,
        monte_carlo,
    ]
    width = max(len(c.name) for c in checks)
    out(f"{'check'.ljust(width)}  points  failed  status")
    for c in checks:
        status = "ok" if c.ok else "FAIL"
        out(f"{c.name.ljust(width)}  {c.points:6d}  {c.failures:6d}  {status}")
    return checks
