"""Exception hierarchy shared by every stage of the codec."""


class FsicError(Exception):
    """Base class for all codec errors."""


class GeometryError(FsicError, ValueError):
    """Image, block or grid dimensions are inconsistent."""


class ParameterError(FsicError, ValueError):
    """Codec parameters outside their valid range."""


# image file parsing

class ImageFormatError(FsicError, ValueError):
    pass


class MalformedHeaderError(ImageFormatError):
    pass


class UnsupportedBitDepthError(ImageFormatError):
    pass


class TruncatedPayloadError(ImageFormatError):
    pass


# corrupt or inconsistent compressed data

class CorruptDataError(FsicError, ValueError):
    pass


class SymbolRangeError(CorruptDataError):
    """An identifier references a cluster that does not exist."""


class UnknownTokenError(CorruptDataError):
    """A token has no entry in the code table."""


class BitsExhaustedError(CorruptDataError):
    """The bitstream ended before all cells were decoded."""


class OvershootError(CorruptDataError):
    """A decoded pattern expands past the expected number of cells."""


class TrailingBitsError(CorruptDataError):
    """Bits remain after the last expected cell was decoded."""


class RowStraddleError(CorruptDataError):
    """A decoded pattern crosses a row boundary."""


class ContainerError(CorruptDataError):
    pass


class BadMagicError(ContainerError):
    pass


class VersionMismatchError(ContainerError):
    pass


class TruncatedContainerError(ContainerError):
    pass


class ChecksumError(ContainerError):
    pass


class InvariantViolation(FsicError, RuntimeError):
    """Internal consistency check failed; indicates a bug or a corrupt pattern set."""
