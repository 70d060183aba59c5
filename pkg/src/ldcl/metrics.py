"""Compression ratio and per-set RMSE."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Context, Decimal
from typing import Sequence, Union

from .container import to_bytes
from .errors import DomainError
from .matrix import Archive, decompress_sets, split_sets
from .numeric import digits_to_int
from .sequence import BitSequence

SetValue = Union[int, str]

_RMSE_CONTEXT = Context(prec=40)
_TWO_PLACES = Decimal("0.01")

REPORT_FIELDS = (
    "original_bytes",
    "compressed_bytes",
    "cr",
    "rmse",
    "set_count",
    "compared_sets",
)


def compression_ratio(original_bytes: int, compressed_bytes: int) -> float:
    """Original size over compressed size."""
    if compressed_bytes < 1:
        raise DomainError("compressed size must be at least one byte")
    return original_bytes / compressed_bytes


def format_ratio(original_bytes: int, compressed_bytes: int) -> str:
    """Ratio rounded half-up to two decimals, from the exact byte counts."""
    if compressed_bytes < 1:
        raise DomainError("compressed size must be at least one byte")
    exact = Context(prec=60).divide(Decimal(original_bytes), Decimal(compressed_bytes))
    return str(exact.quantize(_TWO_PLACES, rounding=ROUND_HALF_UP))


def _as_int(value: SetValue) -> int:
    return digits_to_int(value) if isinstance(value, str) else int(value)


def rmse(original: Sequence[SetValue], reconstructed: Sequence[SetValue]) -> Decimal:
    """Root mean squared difference between paired set values.

    The sum of squares is exact; only the final division and square root
    are rounded, to 40 significant digits.
    """
    if len(original) != len(reconstructed):
        raise ValueError(
            f"cannot compare {len(original)} sets with {len(reconstructed)}"
        )
    if not original:
        raise DomainError("RMSE of an empty set list is undefined")
    total = 0
    for a, b in zip(original, reconstructed):
        diff = _as_int(a) - _as_int(b)
        total += diff * diff
    if total == 0:
        return Decimal(0)
    ctx = _RMSE_CONTEXT
    return ctx.sqrt(ctx.divide(Decimal(total), Decimal(len(original))))


def format_rmse(value: Decimal) -> str:
    """Scientific notation with three significant digits, e.g. ``1.80E+296``."""
    if value == 0:
        return "0.00E+00"
    return format(value, ".2E")


@dataclass(frozen=True)
class MetricsReport:
    original_bytes: int
    compressed_bytes: int
    rmse: Decimal
    set_count: int
    compared_sets: int

    @property
    def cr(self) -> float:
        return compression_ratio(self.original_bytes, self.compressed_bytes)

    @property
    def cr_display(self) -> str:
        if self.original_bytes == 0:
            return "0.00"
        return format_ratio(self.original_bytes, self.compressed_bytes)

    def as_row(self) -> dict:
        return {
            "original_bytes": self.original_bytes,
            "compressed_bytes": self.compressed_bytes,
            "cr": self.cr_display,
            "rmse": format_rmse(self.rmse),
            "set_count": self.set_count,
            "compared_sets": self.compared_sets,
        }

    def render_text(self) -> str:
        row = self.as_row()
        width = max(len(k) for k in row)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in row.items())

    def render_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerow(self.as_row())
        return buf.getvalue()


def measure(
    original: BitSequence | bytes,
    archive: Archive,
    compressed_bytes: int | None = None,
    workers: int | None = None,
) -> MetricsReport:
    """Compare ``original`` against what ``archive`` reconstructs."""
    if not isinstance(original, BitSequence):
        original = BitSequence.from_bytes(original)
    if original.bit_length != archive.bit_length:
        raise ValueError(
            f"original has {original.bit_length} bits, archive describes {archive.bit_length}"
        )
    if compressed_bytes is None:
        compressed_bytes = len(to_bytes(archive))
    before = split_sets(original, archive.params.set_size)
    after = decompress_sets(archive, workers)
    if len(before) != len(after):
        raise ValueError("original input does not match the archive's set layout")
    error = rmse(before, after) if before else Decimal(0)
    return MetricsReport(
        original_bytes=(original.bit_length + 7) // 8,
        compressed_bytes=compressed_bytes,
        rmse=error,
        set_count=archive.set_count,
        compared_sets=len(before),
    )
