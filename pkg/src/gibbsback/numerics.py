"""Scalar arithmetic on two interchangeable backends.

Exact mode represents every quantity as :class:`fractions.Fraction`, so all
partition-law identities hold with zero tolerance.  Log mode represents a
real number by its sign and the natural logarithm of its magnitude
(:class:`LogScalar`), which keeps factorial-scale quantities representable
long after rationals become impractically large.

Plain Python ints mix freely with both backends.  Mixing the two backends
with each other raises ``TypeError`` by design: silently degrading an exact
computation to floating point would defeat the purpose of having the exact
backend at all.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction
from typing import Union

__all__ = [
    "EXACT",
    "LOG",
    "PrecisionWarning",
    "LogScalar",
    "Scalar",
    "rising_factorial",
    "falling_factorial",
    "generalized_rising",
    "parse_rational",
    "make_scalar",
    "scalar_mode",
    "to_float",
    "sign_of",
    "log_abs",
    "zero_like",
    "one_like",
]

EXACT = "exact"
LOG = "log"

# Relative magnitude below which an opposite-sign log-space addition is
# reported as catastrophic cancellation.
CANCELLATION_RTOL = 1e-13

_NEG_INF = float("-inf")


class PrecisionWarning(UserWarning):
    """Catastrophic cancellation detected in log-space addition."""


class LogScalar:
    """A real number stored as a sign and the log of its magnitude.

    ``sign`` is -1, 0 or +1.  Zero is canonical: ``sign == 0`` with
    ``log == -inf``, regardless of how it was produced.  Instances are
    immutable after construction and safe to share between threads.

    Addition of opposite-sign operands uses the stable signed
    log-sum-exp formulation.  When the result is smaller than
    ``CANCELLATION_RTOL`` times the larger operand, a
    :class:`PrecisionWarning` is emitted (the value is still returned).
    """

    __slots__ = ("sign", "log")

    def __init__(self, sign: int, log: float):
        if sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {sign!r}")
        if math.isnan(log) or log == math.inf:
            raise ValueError(f"log magnitude must be finite or -inf, got {log!r}")
        if log == _NEG_INF:
            sign = 0
        if sign == 0:
            log = _NEG_INF
        self.sign = sign
        self.log = log

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls) -> "LogScalar":
        return cls(0, _NEG_INF)

    @classmethod
    def one(cls) -> "LogScalar":
        return cls(1, 0.0)

    @classmethod
    def from_int(cls, n: int) -> "LogScalar":
        if n == 0:
            return cls.zero()
        return cls(1 if n > 0 else -1, math.log(abs(n)))

    @classmethod
    def from_fraction(cls, q) -> "LogScalar":
        q = Fraction(q)
        if q == 0:
            return cls.zero()
        sign = 1 if q > 0 else -1
        # math.log handles arbitrarily large ints, so go via num/den rather
        # than float(q), which can overflow.
        return cls(sign, math.log(abs(q.numerator)) - math.log(q.denominator))

    @classmethod
    def from_float(cls, x: float) -> "LogScalar":
        if math.isnan(x) or math.isinf(x):
            raise ValueError(f"cannot represent {x!r}")
        if x == 0.0:
            return cls.zero()
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    # ------------------------------------------------------------------
    # conversions

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            mag = math.exp(self.log)
        except OverflowError:
            mag = math.inf
        return self.sign * mag

    def __float__(self) -> float:
        return self.to_float()

    def __bool__(self) -> bool:
        return self.sign != 0

    # ------------------------------------------------------------------
    # arithmetic

    @staticmethod
    def _coerce(other):
        if isinstance(other, LogScalar):
            return other
        if isinstance(other, int):
            return LogScalar.from_int(other)
        return None

    def __add__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        if self.sign == 0:
            return rhs
        if rhs.sign == 0:
            return self
        if self.log >= rhs.log:
            big, small = self, rhs
        else:
            big, small = rhs, self
        d = small.log - big.log  # <= 0
        if self.sign == rhs.sign:
            return LogScalar(big.sign, big.log + math.log1p(math.exp(d)))
        # Opposite signs.
        if d == 0.0:
            return LogScalar.zero()
        rel = -math.expm1(d)  # 1 - e^d in (0, 1]
        if rel < CANCELLATION_RTOL:
            warnings.warn(
                f"catastrophic cancellation: result magnitude below "
                f"{CANCELLATION_RTOL:g} of the operands (relative size {rel:.3e})",
                PrecisionWarning,
                stacklevel=2,
            )
        if rel == 0.0:
            return LogScalar.zero()
        return LogScalar(big.sign, big.log + math.log(rel))

    __radd__ = __add__

    def __neg__(self):
        return LogScalar(-self.sign, self.log)

    def __sub__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other):
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs + (-self)

    def __mul__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        if self.sign == 0 or rhs.sign == 0:
            return LogScalar.zero()
        return LogScalar(self.sign * rhs.sign, self.log + rhs.log)

    __rmul__ = __mul__

    def __truediv__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        if rhs.sign == 0:
            raise ZeroDivisionError("log-scalar division by zero")
        if self.sign == 0:
            return LogScalar.zero()
        return LogScalar(self.sign * rhs.sign, self.log - rhs.log)

    def __rtruediv__(self, other):
        lhs = self._coerce(other)
        if lhs is None:
            return NotImplemented
        return lhs / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if self.sign == 0:
            if exponent == 0:
                return LogScalar.one()
            if exponent < 0:
                raise ZeroDivisionError("zero to a negative power")
            return LogScalar.zero()
        sign = 1 if self.sign == 1 or exponent % 2 == 0 else -1
        return LogScalar(sign, self.log * exponent)

    def __abs__(self):
        return LogScalar(abs(self.sign), self.log)

    # ------------------------------------------------------------------
    # comparison

    def _cmp(self, other) -> int:
        if self.sign != other.sign:
            return -1 if self.sign < other.sign else 1
        if self.sign == 0 or self.log == other.log:
            return 0
        if self.sign > 0:
            return -1 if self.log < other.log else 1
        return -1 if self.log > other.log else 1

    def __eq__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._cmp(rhs) == 0

    def __lt__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._cmp(rhs) < 0

    def __le__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._cmp(rhs) <= 0

    def __gt__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._cmp(rhs) > 0

    def __ge__(self, other):
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self._cmp(rhs) >= 0

    def __hash__(self):
        return hash((self.sign, self.log))

    def __repr__(self):
        if self.sign == 0:
            return "LogScalar(0)"
        return f"LogScalar({'+' if self.sign > 0 else '-'}exp({self.log!r}))"


Scalar = Union[int, Fraction, LogScalar]


# ----------------------------------------------------------------------
# factorial primitives (generic over both backends)


def rising_factorial(x: Scalar, s: int) -> Scalar:
    """Product x (x+1) ... (x+s-1); the empty product (s=0) is 1."""
    if s < 0:
        raise ValueError(f"order must be nonnegative, got {s}")
    result = None
    for i in range(s):
        term = x + i
        result = term if result is None else result * term
    return one_like(x) if result is None else result


def falling_factorial(x: Scalar, s: int) -> Scalar:
    """Product x (x-1) ... (x-s+1); the empty product (s=0) is 1."""
    if s < 0:
        raise ValueError(f"order must be nonnegative, got {s}")
    result = None
    for i in range(s):
        term = x - i
        result = term if result is None else result * term
    return one_like(x) if result is None else result


def generalized_rising(x: Scalar, j: int, step: Scalar) -> Scalar:
    """Product x (x+step) (x+2 step) ... (x+(j-1) step).

    ``step == 1`` reduces to :func:`rising_factorial`; ``step == 0``
    gives the plain power ``x**j``.
    """
    if j < 0:
        raise ValueError(f"order must be nonnegative, got {j}")
    result = None
    for i in range(j):
        term = x + i * step
        result = term if result is None else result * term
    return one_like(x) if result is None else result


# ----------------------------------------------------------------------
# mode plumbing


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q', integer, or decimal notation into an exact Fraction."""
    return Fraction(str(text).strip())


def make_scalar(value, mode: str) -> Scalar:
    """Coerce an int, Fraction, str or float into the requested backend."""
    if mode == EXACT:
        if isinstance(value, LogScalar):
            raise TypeError("cannot coerce a LogScalar into exact mode")
        if isinstance(value, float):
            return Fraction(value).limit_denominator(10**15)
        return Fraction(value)
    if mode == LOG:
        if isinstance(value, LogScalar):
            return value
        if isinstance(value, float):
            return LogScalar.from_float(value)
        return LogScalar.from_fraction(Fraction(value))
    raise ValueError(f"unknown mode {mode!r}")


def scalar_mode(x: Scalar) -> str:
    return LOG if isinstance(x, LogScalar) else EXACT


def sign_of(x: Scalar) -> int:
    if isinstance(x, LogScalar):
        return x.sign
    return (x > 0) - (x < 0)


def log_abs(x: Scalar) -> float:
    """Natural log of |x|; -inf for zero.  Exact values convert losslessly."""
    if isinstance(x, LogScalar):
        return x.log
    q = Fraction(x)
    if q == 0:
        return _NEG_INF
    return math.log(abs(q.numerator)) - math.log(q.denominator)


def to_float(x: Scalar) -> float:
    if isinstance(x, LogScalar):
        return x.to_float()
    return float(x)


def zero_like(x: Scalar) -> Scalar:
    return LogScalar.zero() if isinstance(x, LogScalar) else Fraction(0)


def one_like(x: Scalar) -> Scalar:
    return LogScalar.one() if isinstance(x, LogScalar) else Fraction(1)
