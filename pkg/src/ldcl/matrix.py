"""Set decomposition, the 2 x n log matrix, and the full codec pipeline."""

from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .errors import AlphabetError
from .numeric import (
    DefaultNumber,
    LogFraction,
    add_multiples,
    antilog_default,
    clamped_log,
    digits_to_int,
    divmod_default,
    int_to_digits,
    log_base_default,
    power_default,
)
from .sequence import (
    BitSequence,
    DigitString,
    MappedDigits,
    RleDigits,
    map_bits,
    rle_decode,
    rle_encode,
    unmap_digits,
)

M_PROFILES = ("raw", "log")

_SET_RE = re.compile(r"[1-9]+")
_TOKEN_SPLIT_RE = re.compile(r"(1[2-5][5-9]1)")
_REPAIR_TABLE = str.maketrans("016789", "225555")


@dataclass(frozen=True)
class CodecParams:
    """Codec knobs: digits per set, stored log digits, multiplier encoding."""

    set_size: int = 300
    precision: int = 12
    m_profile: str = "raw"

    def __post_init__(self):
        if self.set_size < 2:
            raise ValueError(f"set_size must be >= 2, got {self.set_size}")
        if self.precision < 1:
            raise ValueError(f"precision must be >= 1, got {self.precision}")
        if self.m_profile not in M_PROFILES:
            raise ValueError(f"m_profile must be one of {M_PROFILES}")

    @property
    def log_m(self) -> bool:
        return self.m_profile == "log"


@dataclass(frozen=True)
class SetRecord:
    """One column of the matrix.

    ``multiplier`` is an int for the raw profile and a :class:`LogFraction`
    for the log profile.  Single-digit sets carry only ``verbatim_digit``.
    """

    digit_len: int
    multiplier: Union[int, LogFraction, None] = None
    residue_log: LogFraction | None = None
    r_is_zero: bool = False
    verbatim_digit: str | None = None

    @property
    def is_verbatim(self) -> bool:
        return self.verbatim_digit is not None


@dataclass(frozen=True)
class LogMatrix:
    records: tuple[SetRecord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))

    @property
    def set_count(self) -> int:
        return len(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


@dataclass(frozen=True)
class Archive:
    """Everything needed to rebuild the input: parameters, flags, matrix."""

    params: CodecParams
    bit_length: int
    mapped_length: int
    odd_pad: bool = False
    matrix: LogMatrix = field(default_factory=LogMatrix)

    @property
    def set_count(self) -> int:
        return self.matrix.set_count

    @property
    def last_set_digit_len(self) -> int:
        return self.matrix.records[-1].digit_len if self.matrix.records else 0

    @property
    def stream_length(self) -> int:
        return sum(rec.digit_len for rec in self.matrix.records)


def max_multiplier(length: int) -> int:
    """Largest multiplier a set of ``length`` non-zero digits can produce."""
    d = DefaultNumber.for_set_length(length)
    return DefaultNumber(length).value // d.value


def _ordered_map(fn: Callable, items: Sequence, workers: int | None) -> list:
    # Results are collected in input order, so output does not depend on
    # scheduling.
    if not workers or workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    chunksize = max(1, len(items) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))


def decompose_sets(stream: RleDigits, set_size: int) -> list[DigitString]:
    if set_size < 1:
        raise ValueError("set_size must be positive")
    return [stream[i:i + set_size] for i in range(0, len(stream), set_size)]


def assemble_titan(sets: Iterable[DigitString]) -> DigitString:
    return "".join(sets)


def compress_set(digits: DigitString, precision: int, m_profile: str = "raw") -> SetRecord:
    if not _SET_RE.fullmatch(digits):
        raise AlphabetError(f"set digits must be 1..9: {digits[:20]!r}")
    length = len(digits)
    if length == 1:
        return SetRecord(1, verbatim_digit=digits)
    d = DefaultNumber.for_set_length(length)
    m, r = divmod_default(digits_to_int(digits), d)
    if r == 0:
        residue = LogFraction.zero(precision)
    else:
        residue = log_base_default(r, d, precision)
    multiplier = clamped_log(m, d, precision) if m_profile == "log" else m
    return SetRecord(length, multiplier, residue, r == 0)


def reconstruct_set(record: SetRecord) -> DigitString:
    if record.is_verbatim:
        return record.verbatim_digit
    length = record.digit_len
    d = DefaultNumber.for_set_length(length)
    r = 0 if record.r_is_zero else antilog_default(record.residue_log, d)
    m = record.multiplier
    if isinstance(m, LogFraction):
        m = min(max(power_default(m, d), 1), max_multiplier(length))
    value = add_multiples(r, m, d)
    # Loss can push m*D + r past the largest `length`-digit number.
    value = min(value, DefaultNumber(length).value)
    return int_to_digits(value, length)


def compress_sets(
    sets: Sequence[DigitString], params: CodecParams, workers: int | None = None
) -> LogMatrix:
    fn = partial(compress_set, precision=params.precision, m_profile=params.m_profile)
    return LogMatrix(_ordered_map(fn, list(sets), workers))


def reconstruct_sets(
    matrix: LogMatrix, params: CodecParams | None = None, workers: int | None = None
) -> list[DigitString]:
    # params is accepted for symmetry with compress_sets; each record is
    # self-describing.
    return _ordered_map(reconstruct_set, list(matrix.records), workers)


def repair_digits(raw: DigitString, expected_len: int) -> RleDigits:
    """Force a possibly corrupted digit stream into valid run-length form.

    The stream is first cut or right-padded with ``2`` to ``expected_len``,
    then scanned left to right: well-formed ``1xn1`` tokens are kept, a stray
    ``1`` or ``0`` becomes ``2`` and ``6``-``9`` become ``5``.
    """
    if len(raw) > expected_len:
        raw = raw[:expected_len]
    elif len(raw) < expected_len:
        raw = raw + "2" * (expected_len - len(raw))
    # split() alternates non-token text (even slots) with tokens (odd slots).
    parts = _TOKEN_SPLIT_RE.split(raw)
    parts[0::2] = [part.translate(_REPAIR_TABLE) for part in parts[0::2]]
    return "".join(parts)


def _fit_bits(seq: BitSequence, bit_length: int) -> BitSequence:
    if seq.bit_length == bit_length:
        return seq
    bits = seq._unpacked()[:bit_length]
    if bits.size < bit_length:
        bits = np.concatenate((bits, np.zeros(bit_length - bits.size, dtype=np.uint8)))
    return BitSequence(np.packbits(bits).tobytes(), bit_length)


def encode_stream(seq: BitSequence) -> tuple[MappedDigits, RleDigits]:
    mapped = map_bits(seq)
    return mapped, rle_encode(mapped)


def split_sets(seq: BitSequence, set_size: int) -> list[DigitString]:
    """The digit sets that :func:`compress` would build for ``seq``."""
    return decompose_sets(encode_stream(seq)[1], set_size)


def compress(
    seq: BitSequence | bytes, params: CodecParams | None = None, workers: int | None = None
) -> Archive:
    return compress_with_sets(seq, params, workers)[0]


def compress_with_sets(
    seq: BitSequence | bytes, params: CodecParams | None = None, workers: int | None = None
) -> tuple[Archive, list[DigitString]]:
    """Compress and also return the original digit sets (for error metrics)."""
    if params is None:
        params = CodecParams()
    if not isinstance(seq, BitSequence):
        seq = BitSequence.from_bytes(seq)
    mapped, stream = encode_stream(seq)
    sets = decompose_sets(stream, params.set_size)
    archive = Archive(
        params=params,
        bit_length=seq.bit_length,
        mapped_length=len(mapped.digits),
        odd_pad=mapped.odd_pad,
        matrix=compress_sets(sets, params, workers),
    )
    return archive, sets


def decompress_sets(archive: Archive, workers: int | None = None) -> list[DigitString]:
    return reconstruct_sets(archive.matrix, archive.params, workers)


def decompress(archive: Archive, workers: int | None = None) -> BitSequence:
    return rebuild_bits(archive, decompress_sets(archive, workers))


def rebuild_bits(archive: Archive, sets: Sequence[DigitString]) -> BitSequence:
    """Finish reconstruction from already reconstructed sets."""
    stream = repair_digits(assemble_titan(sets), archive.stream_length)
    mapped = rle_decode(stream)
    n = archive.mapped_length
    mapped = mapped[:n] if len(mapped) >= n else mapped + "2" * (n - len(mapped))
    bits = unmap_digits(MappedDigits(mapped, archive.odd_pad))
    return _fit_bits(bits, archive.bit_length)
