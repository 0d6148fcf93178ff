"""Exception types raised by the pipeline."""


class CGVSError(Exception):
    """Base class for all errors raised by :mod:`cgvs`."""


class InvalidParameterError(CGVSError, ValueError):
    """A parameter is outside its legal range, or raster shapes disagree."""


class InvalidPartitionError(CGVSError, ValueError):
    """A structure/background partition has an empty side."""


class InvalidInputError(CGVSError, ValueError):
    """Evaluation input is unusable (empty fixations, empty ground truth)."""
