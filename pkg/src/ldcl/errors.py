"""Exception hierarchy for the codec."""


class LDCLError(Exception):
    """Base class for every error raised by this package."""


class AlphabetError(LDCLError, ValueError):
    """A digit outside the alphabet expected by a stage."""


class RLEParseError(LDCLError, ValueError):
    """Malformed run-length token in strict decoding."""


class DomainError(LDCLError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class FormatError(LDCLError):
    """Archive bytes could not be decoded."""


class UnsupportedFormatError(FormatError):
    pass


class CorruptArchiveError(FormatError):
    pass


class TruncatedArchiveError(FormatError):
    pass


class ArchiveValidationError(FormatError):
    pass
