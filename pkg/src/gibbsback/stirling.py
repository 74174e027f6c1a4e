"""Generalized Stirling triangles, recombination coefficients, moment inversion.

The triangle for discount ``alpha`` and shift ``gamma`` holds the connection
coefficients S[n][k] expanding a rising factorial in a shifted, stepped
rising-factorial basis:

    x (x+1) ... (x+n-1)  =  sum_k  S[n][k] * (x+gamma) (x+gamma+alpha) ...
                                             (x+gamma+(k-1) alpha)

Rows are built by the recurrence S[n+1][k] = S[n][k-1] + (n - k*alpha -
gamma) * S[n][k] with S[0][0] = 1, which follows from splitting the factor
(x + n) against the basis.  The central case (gamma = 0) at alpha = 0 gives
the signless Stirling numbers of the first kind; alpha = -1 gives Lah-type
numbers.  Tests validate the recurrence against the defining identity and
against brute-force composition sums.

Triangles are memoized per (mode, alpha, gamma) and grow append-only under a
lock, so concurrent readers are safe.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Optional, Sequence

from .numerics import (
    EXACT,
    LOG,
    LogScalar,
    Scalar,
    falling_factorial,
    make_scalar,
    scalar_mode,
    sign_of,
    to_float,
)

__all__ = [
    "StirlingTriangle",
    "build_triangle",
    "stirling_number",
    "generalized_factorial_coefficient",
    "recombination_coefficients",
    "moments_to_pmf",
    "InconsistentMomentsError",
    "clear_triangle_cache",
]


class InconsistentMomentsError(ValueError):
    """Moment inversion produced a significantly negative probability."""


class StirlingTriangle:
    """Memoized triangle of connection coefficients for one (alpha, gamma).

    Use :func:`build_triangle` to obtain instances; rows extend lazily and
    existing rows are never mutated.
    """

    def __init__(self, alpha: Scalar, gamma: Scalar):
        self.alpha = _normalize(alpha)
        self.gamma = _normalize(gamma)
        self.mode = scalar_mode(self.alpha)
        one = make_scalar(1, self.mode)
        self._zero = make_scalar(0, self.mode)
        self._rows = [[one]]
        self._lock = threading.Lock()

    @property
    def n_max(self) -> int:
        return len(self._rows) - 1

    def ensure(self, n_max: int) -> "StirlingTriangle":
        """Extend the table so rows 0..n_max are available."""
        if self.n_max >= n_max:
            return self
        with self._lock:
            while self.n_max < n_max:
                n = self.n_max
                prev = self._rows[n]
                row = []
                for k in range(n + 2):
                    above = prev[k - 1] if 1 <= k <= n + 1 and k - 1 <= n else None
                    same = prev[k] if k <= n else None
                    acc = None
                    if above is not None:
                        acc = above
                    if same is not None:
                        coeff = n - k * self.alpha - self.gamma
                        term = coeff * same
                        acc = term if acc is None else acc + term
                    row.append(self._zero if acc is None else acc)
                self._rows.append(row)
        return self

    def value(self, n: int, k: int) -> Scalar:
        """S[n][k]; zero for k outside 0..n, error for n outside the table."""
        if n < 0 or n > self.n_max:
            raise ValueError(
                f"row {n} out of range for triangle built to n_max={self.n_max}"
            )
        if k < 0 or k > n:
            return self._zero
        return self._rows[n][k]

    def row(self, n: int) -> tuple:
        if n < 0 or n > self.n_max:
            raise ValueError(
                f"row {n} out of range for triangle built to n_max={self.n_max}"
            )
        return tuple(self._rows[n])

    def __repr__(self):
        return (
            f"StirlingTriangle(alpha={self.alpha!r}, gamma={self.gamma!r}, "
            f"n_max={self.n_max})"
        )


_cache: dict = {}
_cache_lock = threading.Lock()


def _normalize(x: Scalar) -> Scalar:
    if isinstance(x, LogScalar):
        return x
    if isinstance(x, float):
        raise TypeError(
            "float parameters are ambiguous; pass a Fraction or a LogScalar"
        )
    return Fraction(x)


def _key_part(x: Scalar):
    if isinstance(x, LogScalar):
        return ("log", x.sign, x.log)
    return ("exact", x)


def build_triangle(alpha: Scalar, gamma: Scalar = 0, n_max: int = 0) -> StirlingTriangle:
    """Return the memoized triangle for (alpha, gamma), built to >= n_max rows.

    ``alpha`` and ``gamma`` must live in the same numeric mode; ints are
    coerced to the mode of ``alpha``.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    mode = scalar_mode(alpha)
    if isinstance(gamma, int):
        gamma = make_scalar(gamma, mode)
    alpha = _normalize(alpha)
    gamma = _normalize(gamma)
    if scalar_mode(gamma) != mode:
        raise TypeError("alpha and gamma must use the same numeric backend")
    key = (_key_part(alpha), _key_part(gamma))
    with _cache_lock:
        tri = _cache.get(key)
        if tri is None:
            tri = StirlingTriangle(alpha, gamma)
            _cache[key] = tri
    return tri.ensure(n_max)


def clear_triangle_cache() -> None:
    with _cache_lock:
        _cache.clear()


def stirling_number(tri: StirlingTriangle, n: int, k: int) -> Scalar:
    """Table lookup: S[n][k] of the given triangle (zero for k > n)."""
    return tri.value(n, k)


def generalized_factorial_coefficient(tri: StirlingTriangle, n: int, k: int) -> Scalar:
    """alpha**k times the central triangle entry S[n][k].

    Only defined for central triangles (gamma = 0) with alpha != 0; these
    coefficients expand (alpha*x)(alpha*x+1)...(alpha*x+n-1) in rising
    factorials of x.
    """
    if sign_of(tri.alpha) == 0:
        raise ValueError("generalized factorial coefficients are undefined at alpha=0")
    if sign_of(tri.gamma) != 0:
        raise ValueError("generalized factorial coefficients require gamma=0")
    return tri.alpha**k * tri.value(n, k)


def recombination_coefficients(r: int, j: int) -> list:
    """Exact coefficients c[0..r] with (j-x)(j-1-x)...(j-r+1-x) = sum_v c[v]*(x)(x-1)...(x-v+1).

    Computed by solving the defining polynomial identity at the integer
    nodes x = 0..r, where the falling-factorial design matrix is lower
    triangular.  The top coefficient is always (-1)**r.
    """
    if r < 0 or j < 0:
        raise ValueError("r and j must be nonnegative")
    coeffs: list = []
    for x in range(r + 1):
        lhs = falling_factorial(Fraction(j - x), r)
        acc = sum(
            (coeffs[v] * falling_factorial(Fraction(x), v) for v in range(x)),
            Fraction(0),
        )
        coeffs.append((lhs - acc) / math.factorial(x))
    return coeffs


def moments_to_pmf(
    moments: Sequence[Scalar],
    support_max: int,
    tol: Optional[float] = None,
) -> list:
    """Recover the pmf on {0..support_max} from falling factorial moments.

    ``moments[r]`` must be E[X (X-1) ... (X-r+1)] for r = 0..support_max,
    with ``moments[0] == 1``.  Uses the standard inversion

        P(X = x) = sum_i (-1)**i * moments[x+i] / (x! i!).

    In exact mode any negative entry is an error (tol defaults to 0); in log
    mode entries within ``tol`` of zero (default 1e-9) are clamped to zero
    and anything more negative raises :class:`InconsistentMomentsError`.
    """
    if support_max < 0:
        raise ValueError("support_max must be nonnegative")
    if len(moments) < support_max + 1:
        raise ValueError(
            f"need moments up to order {support_max}, got {len(moments) - 1}"
        )
    mode = LOG if any(isinstance(v, LogScalar) for v in moments) else EXACT
    one = make_scalar(1, mode)
    zero = make_scalar(0, mode)
    if mode == EXACT:
        if Fraction(moments[0]) != 1:
            raise ValueError("zeroth falling moment must be 1")
        if tol is None:
            tol = 0.0
    else:
        if abs(to_float(moments[0]) - 1.0) > 1e-9:
            raise ValueError("zeroth falling moment must be 1")
        if tol is None:
            tol = 1e-9
    pmf = []
    for x in range(support_max + 1):
        acc = zero
        for i in range(support_max - x + 1):
            weight = Fraction((-1) ** i, math.factorial(x) * math.factorial(i))
            acc = acc + make_scalar(weight, mode) * moments[x + i]
        if sign_of(acc) < 0:
            if -to_float(acc) > tol:
                raise InconsistentMomentsError(
                    f"moment inversion gave P(X={x}) = {to_float(acc):.3e} < 0"
                )
            acc = zero
        pmf.append(acc)
    return pmf
