"""Exception hierarchy.

ValidationError: bad inputs, rejected before any computation (CLI exit 1).
ComputationError: inputs were legal but the requested quantity is not
defined or could not be extracted at that point (CLI exit 2).
"""


class BandgapDelayError(Exception):
    pass


class ValidationError(BandgapDelayError, ValueError):
    pass


class ComputationError(BandgapDelayError, RuntimeError):
    pass


class OpaquePointError(ComputationError):
    """Transmission too small for the phase (and its derivatives) to mean anything."""


class OutsideGapError(ComputationError):
    """Evanescent decay constant vanishes: the point is in a pass band."""


class DipExtractionError(ComputationError):
    """Coincidence trace has no usable interior minimum."""
