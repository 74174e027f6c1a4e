"""Gibbs-type partition priors: discount alpha plus the weight table V.

A Gibbs prior assigns a partition of n observations into j species the
probability V[n,j] * prod_i (1-alpha)(2-alpha)...(n_i-1-alpha).  The weight
table must satisfy V[1,1] = 1 and the backward recursion

    V[n,j] = (n - j*alpha) * V[n+1,j] + V[n+1,j+1],

which is exactly the statement that the one-step predictive probabilities
(join an existing species, or found a new one) sum to one.

Three families are provided: the two-parameter Poisson-Dirichlet family
(``pitman_yor``), its alpha=0 member (``dirichlet``), and user-supplied
weight tables (``table_prior``), e.g. for theta-mixtures of Dirichlet
weights.
"""

from __future__ import annotations

import csv
import threading
from dataclasses import dataclass
from typing import Optional

from .numerics import (
    EXACT,
    Scalar,
    generalized_rising,
    make_scalar,
    parse_rational,
    rising_factorial,
    sign_of,
    to_float,
)

__all__ = [
    "GibbsPrior",
    "SampleSummary",
    "PriorValidationError",
    "pitman_yor",
    "dirichlet",
    "table_prior",
    "load_table_csv",
    "dump_table_csv",
]


class PriorValidationError(ValueError):
    """Prior parameters or a weight table violate the Gibbs constraints."""


class GibbsPrior:
    """Discount alpha plus lazily cached weights V[n,j].

    Instances are immutable apart from the internal weight cache, which is
    guarded by a lock; they are safe to share between threads.
    """

    def __init__(self, alpha, weight_fn, family, params, mode, species_cap=None):
        self.alpha = alpha
        self.family = family
        self.params = dict(params)
        self.mode = mode
        self.species_cap = species_cap
        self._weight_fn = weight_fn
        self._cache: dict = {}
        self._lock = threading.Lock()

    def weight(self, n: int, j: int) -> Scalar:
        """V[n,j] for 1 <= j <= n."""
        if n < 1 or j < 1 or j > n:
            raise ValueError(f"weights are defined for 1 <= j <= n, got n={n}, j={j}")
        key = (n, j)
        got = self._cache.get(key)
        if got is None:
            got = self._weight_fn(n, j)
            with self._lock:
                self._cache.setdefault(key, got)
        return got

    def max_blocks(self, n: int) -> int:
        """Largest j with positive weight in a sample of size n."""
        if self.species_cap is None:
            return n
        return min(n, self.species_cap)

    def describe(self) -> dict:
        out = {"family": self.family, "mode": self.mode}
        for name, value in self.params.items():
            if isinstance(value, (int, str)):
                out[name] = value
            elif self.mode == EXACT:
                out[name] = str(value)
            else:
                out[name] = repr(to_float(value))
        return out

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in self.describe().items())
        return f"GibbsPrior({inner})"


@dataclass(frozen=True)
class SampleSummary:
    """What was observed initially: size n, species count j, and optionally
    the per-species multiplicities (their presence means complete
    information)."""

    n: int
    j: int
    multiplicities: Optional[tuple] = None

    def __post_init__(self):
        if not 1 <= self.j <= self.n:
            raise ValueError(f"need 1 <= j <= n, got j={self.j}, n={self.n}")
        if self.multiplicities is not None:
            mults = tuple(int(v) for v in self.multiplicities)
            object.__setattr__(self, "multiplicities", mults)
            if len(mults) != self.j:
                raise ValueError(
                    f"expected {self.j} multiplicities, got {len(mults)}"
                )
            if any(v < 1 for v in mults):
                raise ValueError("multiplicities must be positive")
            if sum(mults) != self.n:
                raise ValueError(
                    f"multiplicities sum to {sum(mults)}, expected n={self.n}"
                )

    @property
    def complete(self) -> bool:
        return self.multiplicities is not None


def _check_discount(alpha) -> None:
    if not sign_of(alpha - 1) < 0:
        raise PriorValidationError(f"discount must be < 1, got {alpha!r}")


def pitman_yor(alpha, theta, mode: str = EXACT) -> GibbsPrior:
    """Two-parameter Poisson-Dirichlet prior with V[n,j] =
    theta (theta+alpha) ... (theta+(j-1)alpha) / (theta)(theta+1)...(theta+n-1).

    Valid regions: 0 <= alpha < 1 with theta > -alpha, or alpha < 0 with
    theta a positive integer multiple of |alpha| (a finite-species model
    whose species count caps at theta/|alpha|).
    """
    alpha = make_scalar(alpha, mode)
    theta = make_scalar(theta, mode)
    _check_discount(alpha)
    cap = None
    if sign_of(alpha) < 0:
        ratio = theta / (-alpha)
        if mode == EXACT:
            if ratio.denominator != 1 or ratio <= 0:
                raise PriorValidationError(
                    f"negative discount requires theta = m*|alpha| for a "
                    f"positive integer m, got theta/|alpha| = {ratio}"
                )
            cap = int(ratio)
        else:
            approx = to_float(ratio)
            cap = round(approx)
            if cap < 1 or abs(approx - cap) > 1e-9 * max(1.0, approx):
                raise PriorValidationError(
                    f"negative discount requires theta = m*|alpha| for a "
                    f"positive integer m, got theta/|alpha| ~= {approx}"
                )
    else:
        if not sign_of(theta + alpha) > 0:
            raise PriorValidationError(
                f"need theta > -alpha, got theta={theta!r}, alpha={alpha!r}"
            )

    def weight(n, j):
        return generalized_rising(theta, j, alpha) / rising_factorial(theta, n)

    return GibbsPrior(
        alpha,
        weight,
        "pitman-yor",
        {"alpha": alpha, "theta": theta},
        mode,
        species_cap=cap,
    )


def dirichlet(theta, mode: str = EXACT) -> GibbsPrior:
    """Dirichlet prior: alpha = 0 and V[n,j] = theta**j / (theta)(theta+1)...(theta+n-1)."""
    theta = make_scalar(theta, mode)
    if not sign_of(theta) > 0:
        raise PriorValidationError(f"theta must be positive, got {theta!r}")
    alpha = make_scalar(0, mode)

    def weight(n, j):
        return theta**j / rising_factorial(theta, n)

    return GibbsPrior(alpha, weight, "dirichlet", {"theta": theta}, mode)


def table_prior(alpha, grid: dict, mode: str = EXACT, tol: float = 1e-9) -> GibbsPrior:
    """Prior backed by an explicit weight grid {(n, j): value, 1 <= j <= n <= n_max}.

    The grid must cover the whole triangle, have V[1,1] = 1, strictly
    positive entries, and satisfy the backward recursion up to relative
    tolerance ``tol`` (exact grids pass with tol = 0); violations are
    rejected at construction.
    """
    alpha = make_scalar(alpha, mode)
    _check_discount(alpha)
    table = {}
    n_max = 0
    for (n, j), value in grid.items():
        if not 1 <= j <= n:
            raise PriorValidationError(f"grid key ({n},{j}) outside the triangle")
        table[(n, j)] = make_scalar(value, mode)
        n_max = max(n_max, n)
    for n in range(1, n_max + 1):
        for j in range(1, n + 1):
            if (n, j) not in table:
                raise PriorValidationError(f"grid is missing entry ({n},{j})")
    if table[(1, 1)] != make_scalar(1, mode):
        raise PriorValidationError(f"V[1,1] must be 1, got {table[(1, 1)]!r}")
    for value in table.values():
        if not sign_of(value) > 0:
            raise PriorValidationError("all weights must be strictly positive")
    for n in range(1, n_max):
        for j in range(1, n + 1):
            lhs = table[(n, j)]
            rhs = (n - j * alpha) * table[(n + 1, j)] + table[(n + 1, j + 1)]
            residual = to_float(lhs - rhs)
            if abs(residual) > tol * abs(to_float(lhs)):
                raise PriorValidationError(
                    f"backward recursion fails at (n={n}, j={j}): "
                    f"residual {residual:.3e}"
                )

    def weight(n, j):
        got = table.get((n, j))
        if got is None:
            raise ValueError(
                f"weight table covers n <= {n_max}, requested (n={n}, j={j})"
            )
        return got

    prior = GibbsPrior(alpha, weight, "table", {"alpha": alpha, "n_max": n_max}, mode)
    prior.table_n_max = n_max
    return prior


def load_table_csv(path, alpha, mode: str = EXACT, tol: float = 1e-9) -> GibbsPrior:
    """Read a weight grid from CSV with header n,j,value.

    Values may be exact fraction strings like ``3/4`` or decimals; both
    parse exactly.
    """
    grid = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != [
            "n",
            "j",
            "value",
        ]:
            raise PriorValidationError(
                f"expected CSV header 'n,j,value', got {reader.fieldnames}"
            )
        for line in reader:
            grid[(int(line["n"]), int(line["j"]))] = parse_rational(line["value"])
    return table_prior(alpha, grid, mode=mode, tol=tol)


def dump_table_csv(prior: GibbsPrior, n_max: int, path) -> None:
    """Write the prior's weights for the triangle n <= n_max as n,j,value CSV."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "j", "value"])
        for n in range(1, n_max + 1):
            for j in range(1, n + 1):
                value = prior.weight(n, j)
                text = str(value) if prior.mode == EXACT else repr(to_float(value))
                writer.writerow([n, j, text])
