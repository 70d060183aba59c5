"""Brute-force references for validating the codec at small scale.

Nothing here is used by the codec itself.  The subtraction loop is the
literal procedure, one subtraction at a time, so it is only practical for
small set values.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

from .matrix import CodecParams, compress_sets, reconstruct_sets
from .numeric import DefaultNumber, digits_to_int

MAX_SET_DIGITS = 6


@dataclass(frozen=True)
class OracleConfig:
    max_set_digits: int = 4
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.max_set_digits <= MAX_SET_DIGITS:
            raise ValueError(f"max_set_digits must be in [1, {MAX_SET_DIGITS}]")


def naive_subtract_count(s: int, d: DefaultNumber) -> tuple[int, int]:
    """Subtract D from ``s`` until the remainder is below D."""
    if s < 1:
        raise ValueError("set value must be at least 1")
    D = d.value
    count = 0
    while s >= D:
        s -= D
        count += 1
    return count, s


@dataclass
class RoundtripReport:
    set_size: int
    precision: int
    cases: int = 0
    failures: list = field(default_factory=list)
    # |original - reconstructed| -> number of sets with that error
    distortion: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.failures


def exhaustive_roundtrip(
    set_size: int,
    precision: int,
    m_profile: str = "raw",
    config: OracleConfig | None = None,
) -> RoundtripReport:
    """Push every ``set_size``-digit string over 1..9 through the matrix stage.

    Mismatches count as failures only in the lossless regime
    ``precision >= set_size + 5``; below it they are histogrammed.
    """
    config = config or OracleConfig(max_set_digits=max(set_size, 1))
    if set_size > config.max_set_digits:
        raise ValueError(f"set_size {set_size} exceeds max_set_digits {config.max_set_digits}")
    params = CodecParams(max(set_size, 2), precision, m_profile)
    sets = ["".join(t) for t in itertools.product("123456789", repeat=set_size)]
    rebuilt = reconstruct_sets(compress_sets(sets, params), params)

    report = RoundtripReport(set_size, precision, cases=len(sets))
    lossless = precision >= set_size + 5
    for before, after in zip(sets, rebuilt):
        err = abs(digits_to_int(before) - digits_to_int(after))
        report.distortion[err] += 1
        if err and lossless:
            report.failures.append((before, after))
    return report
