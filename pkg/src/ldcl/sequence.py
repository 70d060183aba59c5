"""Bit stream <-> digit stream conversion and the ``1xn1`` run-length format.

Bit pairs are mapped to digits (00->2, 01->3, 10->4, 11->5).  Runs of five or
more equal digits are then replaced by four-digit tokens ``1 x n 1`` where
``x`` is the repeated digit and ``n`` the run length, 5..9.  Longer runs are
emitted as several tokens followed by a literal remainder of at most four.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import AlphabetError, RLEParseError

# Type aliases: digit streams are plain ``str`` of ASCII digits.
DigitString = str
RleDigits = str

RUN_THRESHOLD = 5
MAX_RUN = 9

_RUN_RE = re.compile(r"([2-5])\1{4,}")
_TOKEN_RE = re.compile(r"1([2-5])([5-9])1")
_STRICT_RE = re.compile(r"(?:[2-5]|1[2-5][5-9]1)*")
_NON_MAPPED_RE = re.compile(r"[^2-5]")
_MAPPED_RE = re.compile(r"[2-5]*")


@dataclass(frozen=True)
class BitSequence:
    """Packed bit stream, most significant bit first within each byte.

    ``data`` holds ``ceil(bit_length / 8)`` bytes; unused trailing bits of the
    last byte are zero so that equal sequences compare equal.
    """

    data: bytes
    bit_length: int

    def __post_init__(self):
        if self.bit_length < 0:
            raise ValueError("bit_length must be non-negative")
        if len(self.data) != (self.bit_length + 7) // 8:
            raise ValueError(
                f"{len(self.data)} bytes cannot hold exactly {self.bit_length} bits"
            )
        spare = -self.bit_length % 8
        if spare and self.data[-1] & ((1 << spare) - 1):
            raise ValueError("padding bits of the last byte must be zero")

    @classmethod
    def from_bytes(cls, data: bytes) -> "BitSequence":
        return cls(bytes(data), 8 * len(data))

    @classmethod
    def from_bits(cls, bits: Iterable[int] | str) -> "BitSequence":
        if isinstance(bits, str):
            arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        else:
            arr = np.fromiter((int(b) for b in bits), dtype=np.int64).astype(np.uint8)
        if arr.size and arr.max() > 1:
            raise ValueError("bit symbols must be 0 or 1")
        return cls(np.packbits(arr).tobytes(), int(arr.size))

    def to_bits(self) -> str:
        """Return the bits as a string of ``'0'``/``'1'`` characters."""
        return "".join(str(b) for b in self._unpacked())

    def _unpacked(self) -> np.ndarray:
        arr = np.frombuffer(self.data, dtype=np.uint8)
        return np.unpackbits(arr)[: self.bit_length]

    def __len__(self) -> int:
        return self.bit_length


@dataclass(frozen=True)
class MappedDigits:
    digits: DigitString
    odd_pad: bool = False


def map_bits(seq: BitSequence) -> MappedDigits:
    """Map consecutive bit pairs to the digits 2..5.

    An odd-length input gets a synthetic leading ``1`` and ``odd_pad`` set.
    """
    bits = seq._unpacked()
    odd = bool(seq.bit_length % 2)
    if odd:
        bits = np.concatenate((np.ones(1, dtype=np.uint8), bits))
    pairs = bits.reshape(-1, 2)
    codes = (ord("2") + 2 * pairs[:, 0] + pairs[:, 1]).astype(np.uint8)
    return MappedDigits(codes.tobytes().decode("ascii"), odd)


def unmap_digits(mapped: MappedDigits) -> BitSequence:
    digits = mapped.digits
    if not _MAPPED_RE.fullmatch(digits):
        bad = next(c for c in digits if c not in "2345")
        raise AlphabetError(f"digit {bad!r} is not a mapped digit (2..5)")
    codes = np.frombuffer(digits.encode("ascii"), dtype=np.uint8) - ord("2")
    bits = np.empty(2 * codes.size, dtype=np.uint8)
    bits[0::2] = codes >> 1
    bits[1::2] = codes & 1
    if mapped.odd_pad:
        if bits.size == 0:
            raise AlphabetError("odd_pad set on an empty digit stream")
        bits = bits[1:]
    return BitSequence(np.packbits(bits).tobytes(), int(bits.size))


def _encode_run(match: re.Match) -> str:
    digit = match.group(1)
    run = match.end() - match.start()
    out = []
    while run >= RUN_THRESHOLD:
        n = min(run, MAX_RUN)
        out.append(f"1{digit}{n}1")
        run -= n
    out.append(digit * run)
    return "".join(out)


def rle_encode(mapped: MappedDigits | DigitString) -> RleDigits:
    digits = mapped.digits if isinstance(mapped, MappedDigits) else mapped
    if not _MAPPED_RE.fullmatch(digits):
        raise AlphabetError("run-length input must contain only digits 2..5")
    return _RUN_RE.sub(_encode_run, digits)


def _expand_token(match: re.Match) -> str:
    return match.group(1) * int(match.group(2))


def rle_decode(stream: RleDigits) -> DigitString:
    """Strictly expand ``1xn1`` tokens; raise on anything unparseable."""
    # Literals never contain 1, so leftmost token matching is the parse;
    # anything outside 2..5 left over after expansion is an error.
    expanded = _TOKEN_RE.sub(_expand_token, stream)
    if _NON_MAPPED_RE.search(expanded):
        pos = _STRICT_RE.match(stream).end()
        raise RLEParseError(
            f"unparseable digit {stream[pos]!r} at offset {pos}: "
            f"{stream[pos:pos + 4]!r}"
        )
    return expanded
