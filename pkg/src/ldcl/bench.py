"""Parameter sweeps over set size and precision, reported as CSV rows."""

from __future__ import annotations

import csv
import io
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .container import from_bytes, write_archive
from .matrix import CodecParams, compress_with_sets, decompress_sets, rebuild_bits
from .metrics import format_ratio, format_rmse, rmse

CSV_COLUMNS = ("T", "p", "trial", "original_bytes", "compressed_bytes", "cr", "rmse")
PRNG_NAME = "numpy.random.PCG64"
ERROR_MARK = "ERROR"

_LOSSLESS_RE = re.compile(r"T\+(\d+)")


def parse_precision(token: str) -> int | str:
    """An integer, or ``T+k`` meaning set size plus k (resolved per cell)."""
    token = token.strip()
    if _LOSSLESS_RE.fullmatch(token):
        return token
    value = int(token)
    if value < 1:
        raise ValueError(f"precision must be >= 1, got {value}")
    return value


def resolve_precision(p: int | str, set_size: int) -> int:
    if isinstance(p, int):
        return p
    return set_size + int(_LOSSLESS_RE.fullmatch(p).group(1))


@dataclass(frozen=True)
class BenchSpec:
    set_sizes: tuple[int, ...]
    precisions: tuple[int | str, ...]
    input_path: str | None = None
    random_bytes: int = 1 << 20
    seed: int = 0
    trials: int = 1
    m_profile: str = "raw"

    def __post_init__(self):
        object.__setattr__(self, "set_sizes", tuple(self.set_sizes))
        object.__setattr__(self, "precisions", tuple(self.precisions))
        if not self.set_sizes or any(t < 2 for t in self.set_sizes):
            raise ValueError("every set size must be >= 2")
        if not self.precisions:
            raise ValueError("at least one precision is required")
        for p in self.precisions:
            if isinstance(p, int) and p < 1:
                raise ValueError("every precision must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.input_path is None and self.random_bytes < 0:
            raise ValueError("random_bytes must be non-negative")

    def cells(self) -> list[tuple[int, int]]:
        return [(t, resolve_precision(p, t)) for t in self.set_sizes for p in self.precisions]

    def describe_source(self) -> str:
        if self.input_path is not None:
            return f"input={self.input_path}"
        return f"prng={PRNG_NAME} seed={self.seed} random_bytes={self.random_bytes}"


@dataclass(frozen=True)
class BenchRow:
    T: int
    p: int
    trial: int
    original_bytes: int
    compressed_bytes: int | None
    rmse: Decimal | None
    error: str | None = None
    exact: bool | None = None  # decompressed bytes identical to the input

    @property
    def cr(self) -> str:
        if self.error is not None:
            return ERROR_MARK
        if self.original_bytes == 0:
            return "0.00"
        return format_ratio(self.original_bytes, self.compressed_bytes)

    def as_csv(self) -> list:
        if self.error is not None:
            return [self.T, self.p, self.trial, self.original_bytes, "", ERROR_MARK,
                    f"{ERROR_MARK}: {self.error}"]
        return [self.T, self.p, self.trial, self.original_bytes, self.compressed_bytes,
                self.cr, format_rmse(self.rmse)]


def trial_input(spec: BenchSpec, trial: int) -> bytes:
    """Bytes for one trial; random corpora are seeded by (seed, trial)."""
    if spec.input_path is not None:
        return Path(spec.input_path).read_bytes()
    rng = np.random.Generator(np.random.PCG64([spec.seed, trial]))
    return rng.bytes(spec.random_bytes)


def run_cell(data: bytes, set_size: int, precision: int, trial: int, m_profile: str = "raw") -> BenchRow:
    try:
        params = CodecParams(set_size, precision, m_profile)
        archive, original_sets = compress_with_sets(data, params)
        buf = io.BytesIO()
        size = write_archive(archive, buf)
        restored = from_bytes(buf.getvalue())
        rebuilt_sets = decompress_sets(restored)
        output = rebuild_bits(restored, rebuilt_sets)
        error = rmse(original_sets, rebuilt_sets) if original_sets else Decimal(0)
        return BenchRow(set_size, precision, trial, len(data), size, error,
                        exact=output.data == data)
    except Exception as exc:  # a failed cell is reported, not fatal
        return BenchRow(set_size, precision, trial, len(data), None, None,
                        error=f"{type(exc).__name__}: {exc}")


def _run_job(job):
    spec, set_size, precision, trial = job
    return run_cell(trial_input(spec, trial), set_size, precision, trial, spec.m_profile)


def run_bench(spec: BenchSpec, jobs: int | None = None) -> list[BenchRow]:
    """Run every (T, p, trial) cell; rows come back in that order."""
    work = [(spec, t, p, trial) for t, p in spec.cells() for trial in range(spec.trials)]
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_job, work))
    inputs = {}
    rows = []
    for _, t, p, trial in work:
        if trial not in inputs:
            inputs[trial] = trial_input(spec, trial)
        rows.append(run_cell(inputs[trial], t, p, trial, spec.m_profile))
    return rows


def write_csv(rows: Iterable[BenchRow], out: TextIO, spec: BenchSpec | None = None) -> None:
    if spec is not None:
        out.write(f"# ldcl bench {spec.describe_source()} trials={spec.trials} "
                  f"m_profile={spec.m_profile}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv())

