"""LDCL: lossy data compression by logarithms of digit sets.

Input bits are mapped to digits, run-length reduced, cut into fixed-size
sets, and each set is stored as ``(m, log_D r)`` where ``D`` is a repunit of
nines and ``set = m * D + r``.
"""

from .container import archive_size, from_bytes, read_archive, to_bytes, write_archive
from .errors import (
    AlphabetError,
    ArchiveValidationError,
    CorruptArchiveError,
    DomainError,
    FormatError,
    LDCLError,
    RLEParseError,
    TruncatedArchiveError,
    UnsupportedFormatError,
)
from .matrix import (
    Archive,
    CodecParams,
    LogMatrix,
    SetRecord,
    assemble_titan,
    compress,
    compress_sets,
    decompose_sets,
    decompress,
    reconstruct_sets,
    repair_digits,
)
from .metrics import MetricsReport, compression_ratio, measure, rmse
from .numeric import (
    DefaultNumber,
    LogFraction,
    add_multiples,
    antilog_default,
    divmod_default,
    log_base_default,
)
from .sequence import BitSequence, MappedDigits, map_bits, rle_decode, rle_encode, unmap_digits

__version__ = "0.1.0"
