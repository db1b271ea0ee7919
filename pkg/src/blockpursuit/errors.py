"""Exception types shared across the package."""


class BlockPursuitError(Exception):
    """Base class for all errors raised by this package."""


class UnsupportedFormatError(BlockPursuitError):
    """Input file is not a grayscale P5 PGM or an 8-bit grayscale PNG."""


class CorruptHeaderError(BlockPursuitError):
    """Image file recognized but its header or payload is malformed."""


class DimensionError(BlockPursuitError, ValueError):
    """Shape constraint violated (divisibility, mismatch, invalid sizes)."""


class SaturatedBlockError(BlockPursuitError):
    """A pursuit step was requested on a block that cannot take more atoms."""


class NoAtomsSelectedError(BlockPursuitError):
    """A sparsity ratio was requested for a decomposition with zero atoms."""


class TargetUnreachableError(BlockPursuitError):
    """The requested quality target exceeds what the method can achieve."""
