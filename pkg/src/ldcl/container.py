"""Binary ``.ldcl`` archive format.

Layout, all integers big-endian::

    header (36 bytes)
      magic              4s   b"LDCL"
      version            B    1
      flags              B    bit0 odd-length pad, bit1 log-encoded multipliers
      set_size           I
      precision          H
      original_bits      Q
      mapped_digits      Q
      set_count          I
      last_set_digits    I
    records, in set order
      m_byte             B    low nibble multiplier (raw profile), bit7 r == 0,
                              0xFF marks a verbatim single-digit set
      residue digits     precision ASCII digits (1 digit for verbatim sets)
      log(m) digits      precision ASCII digits, log profile only
    crc32                I    over every preceding byte
"""

from __future__ import annotations

import struct
import zlib
from typing import BinaryIO

from .errors import (
    ArchiveValidationError,
    CorruptArchiveError,
    TruncatedArchiveError,
    UnsupportedFormatError,
)
from .matrix import Archive, CodecParams, LogMatrix, SetRecord, max_multiplier
from .numeric import LogFraction

MAGIC = b"LDCL"
VERSION = 1
HEADER = struct.Struct(">4sBBIHQQII")
HEADER_SIZE = HEADER.size
CRC_SIZE = 4

FLAG_ODD_PAD = 0x01
FLAG_LOG_M = 0x02

VERBATIM = 0xFF
SENTINEL_BIT = 0x80
MULTIPLIER_MASK = 0x0F

_DIGITS = frozenset(b"0123456789")


def record_size(precision: int, log_m: bool = False, verbatim: bool = False) -> int:
    if verbatim:
        return 2
    return 1 + precision * (2 if log_m else 1)


def archive_size(set_count: int, precision: int, log_m: bool = False, verbatim_count: int = 0) -> int:
    """Exact serialized size in bytes for the given record mix."""
    regular = set_count - verbatim_count
    return (
        HEADER_SIZE
        + regular * record_size(precision, log_m)
        + verbatim_count * record_size(precision, verbatim=True)
        + CRC_SIZE
    )


def _encode_record(rec: SetRecord, log_m: bool) -> bytes:
    if rec.is_verbatim:
        return bytes((VERBATIM,)) + rec.verbatim_digit.encode("ascii")
    flag = SENTINEL_BIT if rec.r_is_zero else 0
    if log_m:
        return bytes((flag,)) + rec.residue_log.digits.encode("ascii") + rec.multiplier.digits.encode("ascii")
    return bytes((flag | rec.multiplier,)) + rec.residue_log.digits.encode("ascii")


def to_bytes(archive: Archive) -> bytes:
    params = archive.params
    flags = (FLAG_ODD_PAD if archive.odd_pad else 0) | (FLAG_LOG_M if params.log_m else 0)
    parts = [
        HEADER.pack(
            MAGIC,
            VERSION,
            flags,
            params.set_size,
            params.precision,
            archive.bit_length,
            archive.mapped_length,
            archive.set_count,
            archive.last_set_digit_len,
        )
    ]
    parts.extend(_encode_record(rec, params.log_m) for rec in archive.matrix)
    body = b"".join(parts)
    return body + struct.pack(">I", zlib.crc32(body))


def write_archive(archive: Archive, sink: BinaryIO) -> int:
    """Serialize ``archive`` to ``sink``; returns the number of bytes written."""
    blob = to_bytes(archive)
    sink.write(blob)
    return len(blob)


def read_archive(source: BinaryIO) -> Archive:
    return from_bytes(source.read())


def _check_header(set_size, precision, bit_length, mapped_length, set_count, last_len):
    if set_size < 2:
        raise ArchiveValidationError(f"set size {set_size} is below 2")
    if precision < 1:
        raise ArchiveValidationError("precision must be at least 1")
    if mapped_length != (bit_length + 1) // 2:
        raise ArchiveValidationError(
            f"mapped length {mapped_length} inconsistent with {bit_length} bits"
        )
    if set_count == 0:
        if last_len != 0:
            raise ArchiveValidationError("empty archive must have last set length 0")
    elif not 1 <= last_len <= set_size:
        raise ArchiveValidationError(f"last set length {last_len} outside [1, {set_size}]")


def _digits_field(blob: bytes, what: str) -> str:
    if not set(blob) <= _DIGITS:
        raise ArchiveValidationError(f"{what} contains non-digit bytes")
    return blob.decode("ascii")


def from_bytes(data: bytes) -> Archive:
    if len(data) < len(MAGIC) and MAGIC.startswith(data):
        raise TruncatedArchiveError(f"archive is only {len(data)} bytes")
    if data[:4] != MAGIC:
        raise UnsupportedFormatError("not an LDCL archive (bad magic)")
    if len(data) < 5 or data[4] != VERSION:
        version = data[4] if len(data) > 4 else None
        raise UnsupportedFormatError(f"unsupported archive version {version}")
    if len(data) < HEADER_SIZE + CRC_SIZE:
        raise TruncatedArchiveError(f"archive is only {len(data)} bytes")

    (_, _, flags, set_size, precision, bit_length, mapped_length,
     set_count, last_len) = HEADER.unpack_from(data)
    log_m = bool(flags & FLAG_LOG_M)

    expected = None
    if set_size >= 2 and precision >= 1 and last_len <= set_size:
        verbatim = 1 if set_count and last_len == 1 else 0
        expected = archive_size(set_count, precision, log_m, verbatim)
        if len(data) < expected:
            raise TruncatedArchiveError(
                f"archive has {len(data)} bytes, header describes {expected}"
            )

    body, (crc,) = data[:-CRC_SIZE], struct.unpack(">I", data[-CRC_SIZE:])
    if zlib.crc32(body) != crc:
        raise CorruptArchiveError("CRC32 mismatch")

    if flags & ~(FLAG_ODD_PAD | FLAG_LOG_M):
        raise ArchiveValidationError(f"unknown flag bits 0x{flags:02x}")
    _check_header(set_size, precision, bit_length, mapped_length, set_count, last_len)
    if len(data) != expected:
        raise ArchiveValidationError(f"{len(data) - expected} trailing bytes after records")
    if bool(flags & FLAG_ODD_PAD) != bool(bit_length % 2):
        raise ArchiveValidationError("odd-length flag disagrees with bit length")

    params = CodecParams(set_size, precision, "log" if log_m else "raw")
    records = []
    pos = HEADER_SIZE
    for i in range(set_count):
        digit_len = last_len if i == set_count - 1 else set_size
        m_byte = data[pos]
        if digit_len == 1:
            if m_byte != VERBATIM:
                raise ArchiveValidationError(f"record {i}: single-digit set must be verbatim")
            digit = _digits_field(data[pos + 1:pos + 2], f"record {i}")
            if digit == "0":
                raise ArchiveValidationError(f"record {i}: verbatim digit 0")
            records.append(SetRecord(1, verbatim_digit=digit))
            pos += 2
            continue
        if m_byte == VERBATIM:
            raise ArchiveValidationError(f"record {i}: verbatim marker on a {digit_len}-digit set")
        r_is_zero = bool(m_byte & SENTINEL_BIT)
        if m_byte & 0x70:
            raise ArchiveValidationError(f"record {i}: reserved bits set in 0x{m_byte:02x}")
        pos += 1
        residue = LogFraction(_digits_field(data[pos:pos + precision], f"record {i} residue"))
        pos += precision
        if r_is_zero and not residue.is_zero():
            raise ArchiveValidationError(f"record {i}: zero-residue record with a non-zero log")
        if log_m:
            if m_byte & MULTIPLIER_MASK:
                raise ArchiveValidationError(f"record {i}: raw multiplier in a log-profile archive")
            multiplier = LogFraction(_digits_field(data[pos:pos + precision], f"record {i} log(m)"))
            pos += precision
        else:
            multiplier = m_byte & MULTIPLIER_MASK
            if not 1 <= multiplier <= max_multiplier(digit_len):
                raise ArchiveValidationError(f"record {i}: multiplier {multiplier} out of range")
        records.append(SetRecord(digit_len, multiplier, residue, r_is_zero))

    return Archive(
        params=params,
        bit_length=bit_length,
        mapped_length=mapped_length,
        odd_pad=bool(flags & FLAG_ODD_PAD),
        matrix=LogMatrix(records),
    )


def save(archive: Archive, path) -> int:
    with open(path, "wb") as fh:
        return write_archive(archive, fh)


def load(path) -> Archive:
    with open(path, "rb") as fh:
        return read_archive(fh)

