"""Exact set arithmetic against a repunit of nines, and base-D log/antilog.

Set values are plain Python ints.  Logarithms are evaluated with MPFR (via
gmpy2) at a working precision derived from the requested number of stored
fraction digits, then rounded half away from zero to that many digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
from gmpy2 import mpz

from .errors import AlphabetError, DomainError

_LOG2_10 = math.log2(10)
# Guard digits on top of the stored precision; ``ceil(log10 T)`` more are
# added per call since ln(D) grows with the number of digits of D.
GUARD_DIGITS = 10


def digits_to_int(digits: str) -> int:
    """Parse a decimal digit string with no length cap."""
    if not digits or not digits.isdigit() or not digits.isascii():
        raise AlphabetError(f"not a decimal digit string: {digits[:20]!r}")
    return int(mpz(digits))


def int_to_digits(value: int, width: int = 0) -> str:
    """Render ``value`` in decimal, left-padded with zeros to ``width``."""
    if value < 0:
        raise DomainError("negative values have no digit representation")
    return mpz(value).digits(10).rjust(width, "0")


@dataclass(frozen=True)
class DefaultNumber:
    """The repunit ``10**nines - 1`` used as subtrahend and logarithm base."""

    nines: int

    def __post_init__(self):
        if self.nines < 1:
            raise DomainError("a default number needs at least one digit")

    @property
    def value(self) -> int:
        return _repunit(self.nines)

    @property
    def digits(self) -> str:
        return "9" * self.nines

    @classmethod
    def for_set_length(cls, length: int) -> "DefaultNumber":
        return cls(length - 1)


@lru_cache(maxsize=256)
def _repunit(nines: int) -> int:
    return 10**nines - 1


@dataclass(frozen=True)
class LogFraction:
    """A value in [0, 1) stored as exactly ``precision`` fraction digits."""

    digits: str

    def __post_init__(self):
        if not self.digits or not (self.digits.isascii() and self.digits.isdigit()):
            raise ValueError(f"log fraction digits must be decimal: {self.digits!r}")

    @property
    def precision(self) -> int:
        return len(self.digits)

    @property
    def numerator(self) -> int:
        """Integer k such that the fraction equals k / 10**precision."""
        return int(mpz(self.digits))

    @classmethod
    def zero(cls, precision: int) -> "LogFraction":
        return cls("0" * precision)

    @classmethod
    def from_numerator(cls, k: int, precision: int) -> "LogFraction":
        if not 0 <= k < _pow10(precision):
            raise DomainError(f"numerator {k} does not fit {precision} digits")
        return cls(mpz(k).digits(10).rjust(precision, "0"))

    def is_zero(self) -> bool:
        return self.digits.count("0") == len(self.digits)

    def __str__(self) -> str:
        return "0." + self.digits


def _bits_for(digits: int) -> int:
    return int(math.ceil(digits * _LOG2_10)) + 16


# floor(x + 1/2) rounds half away from zero for x >= 0.
_HALF = gmpy2.mpfr("0.5")


@lru_cache(maxsize=64)
def _pow10(n: int):
    return mpz(10) ** n


@lru_cache(maxsize=512)
def _ln_default(nines: int, bits: int):
    ctx = gmpy2.context(precision=bits)
    return ctx.log(mpz(_repunit(nines)))


def divmod_default(s: int, d: DefaultNumber) -> tuple[int, int]:
    """Return ``(m, r)`` with ``s == m * D + r`` and ``0 <= r < D``.

    ``m`` is the number of times D could be subtracted from ``s`` before the
    remainder drops below D.
    """
    if s < 1:
        raise DomainError("set value must be at least 1")
    return divmod(s, d.value)


def add_multiples(r: int, m: int, d: DefaultNumber) -> int:
    if m < 0 or r < 0:
        raise DomainError("multiplier and residue must be non-negative")
    return r + m * d.value


def _log_numerator(value: int, d: DefaultNumber, precision: int) -> int:
    # round(log_D(value) * 10**p), half away from zero; value >= 1 so the
    # quantity is non-negative and floor(x + 1/2) implements that rule.
    digits = precision + GUARD_DIGITS + len(str(d.nines))
    bits = _bits_for(digits)
    ctx = gmpy2.context(precision=bits)
    ratio = ctx.div(ctx.log(mpz(value)), _ln_default(d.nines, bits))
    scaled = ctx.mul(ratio, _pow10(precision))
    return int(ctx.floor(ctx.add(scaled, _HALF)))


def log_base_default(r: int, d: DefaultNumber, precision: int) -> LogFraction:
    """``log_D(r)`` rounded to ``precision`` fraction digits.

    A value that would round up to exactly 1 is clamped to the largest
    representable fraction (all nines).
    """
    if precision < 1:
        raise DomainError("precision must be at least 1")
    if not 1 <= r < d.value:
        raise DomainError(f"residue must lie in [1, D-1], got {r}")
    k = _log_numerator(r, d, precision)
    return LogFraction.from_numerator(min(k, _pow10(precision) - 1), precision)


def clamped_log(value: int, d: DefaultNumber, precision: int) -> LogFraction:
    """Like :func:`log_base_default` but saturates for ``value >= D``."""
    if value < 1:
        raise DomainError("logarithm argument must be at least 1")
    k = _log_numerator(value, d, precision)
    return LogFraction.from_numerator(min(k, _pow10(precision) - 1), precision)


def power_default(frac: LogFraction, d: DefaultNumber) -> int:
    """Nearest integer to ``D ** frac`` without clamping."""
    k = frac.numerator
    if k == 0:
        return 1
    # D**L < D, so nines digits of integer part plus guards is enough.
    bits = _bits_for(d.nines + GUARD_DIGITS + len(str(d.nines)))
    ctx = gmpy2.context(precision=bits)
    exponent = ctx.div(ctx.mul(_ln_default(d.nines, bits), mpz(k)), _pow10(frac.precision))
    return int(ctx.floor(ctx.add(ctx.exp(exponent), _HALF)))


def antilog_default(frac: LogFraction, d: DefaultNumber) -> int:
    """Nearest integer to ``D ** frac``, clamped into [1, D-1]."""
    return min(max(power_default(frac, d), 1), max(d.value - 1, 1))
