class EpochFormatError(ValueError):
    """Base exception for unreadable epoch files."""

    pass


class BadMagicError(EpochFormatError):
    pass


class VersionMismatchError(EpochFormatError):
    pass


class TruncatedPayloadError(EpochFormatError):
    pass
